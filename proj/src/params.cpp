#include "qhahn/params.hpp"

#include <cmath>
#include <sstream>

#include "qhahn/errors.hpp"

namespace qhahn {

NuSequence NuSequence::constant(double nu) {
  NuSequence s;
  s.tail_ = nu;
  return s;
}

NuSequence NuSequence::geometric(double nu, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ValidationError("geometric nu ratio must lie in (0,1]");
  NuSequence s;
  s.tail_ = nu;
  s.ratio_ = ratio;
  return s;
}

NuSequence NuSequence::explicit_values(std::vector<double> values) {
  if (values.empty()) throw ValidationError("nu list must not be empty");
  NuSequence s;
  s.tail_ = values.back();
  s.prefix_ = std::move(values);
  return s;
}

double NuSequence::operator()(Count i) const {
  if (i < 1) throw DomainError("nu indices start at 1");
  if (i <= static_cast<Count>(prefix_.size())) return prefix_[i - 1];
  if (ratio_ == 1.0) return tail_;
  return tail_ * std::pow(ratio_, static_cast<double>(i - 1 + tail_offset_));
}

double NuSequence::supremum() const {
  double s = ratio_ == 1.0 ? tail_ : (*this)(static_cast<Count>(prefix_.size()) + 1);
  for (double v : prefix_) s = std::max(s, v);
  return s;
}

Count NuSequence::slot(Count i) const {
  const Count p = static_cast<Count>(prefix_.size());
  if (i <= p || ratio_ != 1.0) return i;
  return p + 1;
}

NuSequence NuSequence::swapped(Count n) const {
  if (n < 1) throw DomainError("swap index starts at 1");
  NuSequence s = *this;
  if (static_cast<Count>(s.prefix_.size()) < n + 1) {
    s.prefix_ = first(n + 1);
    if (ratio_ != 1.0) s.tail_offset_ = tail_offset_;
  }
  std::swap(s.prefix_[n - 1], s.prefix_[n]);
  return s;
}

NuSequence NuSequence::scaled(double factor) const {
  NuSequence s = *this;
  for (double& v : s.prefix_) v *= factor;
  s.tail_ *= factor;
  return s;
}

std::vector<double> NuSequence::first(Count count) const {
  std::vector<double> out(count);
  for (Count i = 1; i <= count; ++i) out[i - 1] = (*this)(i);
  return out;
}

void QParams::validate(Count particles_checked) const {
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("q must lie in (0,1)");
  const Count n = std::max<Count>(particles_checked, static_cast<Count>(nus.prefix_size()) + 1);
  for (Count i = 1; i <= n; ++i) {
    double v = nus(i);
    if (!(v > 0.0 && v < 1.0))
      throw ValidationError("nu_" + std::to_string(i) + " must lie in (0,1), got " + std::to_string(v));
    if (gamma * v > 1.0 + 1e-15)
      throw ValidationError("gamma * nu_" + std::to_string(i) + " <= 1 required, got " + std::to_string(gamma * v));
  }
  if (!(gamma >= 1.0)) throw ValidationError("gamma >= 1 required, got " + std::to_string(gamma));
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace qhahn
