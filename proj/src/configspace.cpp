#include "qhahn/configspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhahn/errors.hpp"

namespace qhahn {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim_space(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Count parse_integer(const std::string& s) {
  std::string t = trim_space(s);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw ValidationError("not an integer: '" + s + "'");
  }
  if (used != t.size()) throw ValidationError("not an integer: '" + s + "'");
  return v;
}

}  // namespace

void check_particle_positions(const std::vector<Pos>& positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Count k = static_cast<Count>(i) + 1;
    if (positions[i] + k < 0)
      throw ValidationError("configuration not reachable from step: x_" + std::to_string(k) + " + " +
                            std::to_string(k) + " < 0");
    if (i > 0 && positions[i] >= positions[i - 1])
      throw ValidationError("positions must be strictly decreasing at index " + std::to_string(k));
  }
}

ParticleConfig::ParticleConfig(std::vector<Pos> head) : head_(std::move(head)) {
  check_particle_positions(head_);
  while (!head_.empty() && head_.back() == -static_cast<Pos>(head_.size())) head_.pop_back();
}

Pos ParticleConfig::position(Count n) const {
  if (n < 1) throw DomainError("particle indices start at 1");
  if (n <= deviating()) return head_[n - 1];
  return -n;
}

Count ParticleConfig::gap(Count n) const {
  if (n == 1) return kInfinite;
  return position(n - 1) - position(n) - 1;
}

std::vector<Pos> ParticleConfig::positions(Count count) const {
  std::vector<Pos> out(count);
  for (Count n = 1; n <= count; ++n) out[n - 1] = position(n);
  return out;
}

std::vector<Count> ParticleConfig::gaps(Count count) const {
  std::vector<Count> out(count);
  for (Count n = 1; n <= count; ++n) out[n - 1] = gap(n);
  return out;
}

std::string ParticleConfig::to_string() const {
  std::string s = std::to_string(head_.size()) + ";";
  for (std::size_t i = 0; i < head_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(head_[i]);
  }
  return s;
}

ParticleConfig ParticleConfig::parse(const std::string& text) {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw ValidationError("configuration must look like 'N;x_1,...,x_N'");
  Count n = parse_integer(text.substr(0, semi));
  std::string rest = trim_space(text.substr(semi + 1));
  std::vector<Pos> head;
  if (!rest.empty())
    for (const auto& item : split(rest, ',')) head.push_back(parse_integer(item));
  if (static_cast<Count>(head.size()) != n)
    throw ValidationError("configuration declares " + std::to_string(n) + " entries but lists " +
                          std::to_string(head.size()));
  return ParticleConfig(std::move(head));
}

ParticleConfig apply_move(const ParticleConfig& x, Count n, Pos new_pos) {
  if (n < 1) throw DomainError("particle indices start at 1");
  const Pos upper = n == 1 ? std::numeric_limits<Pos>::max() : x.position(n - 1);
  const Pos lower = x.position(n + 1);
  if (new_pos == x.position(n)) return x;
  if (!(new_pos > lower && new_pos < upper))
    throw ValidationError("move of x_" + std::to_string(n) + " to " + std::to_string(new_pos) +
                          " breaks the ordering");
  std::vector<Pos> head = x.positions(std::max(n, x.deviating()));
  head[n - 1] = new_pos;
  return ParticleConfig(std::move(head));
}

Count balance_defect(const ParticleConfig& x) {
  // Only sites in [-(N+1), x_1] can differ from the step pattern.
  const Count N = x.deviating();
  Count particles_nonneg = 0, holes_neg = 0;
  const auto& h = x.head();
  for (Pos p : h)
    if (p >= 0) ++particles_nonneg;
  for (Pos site = -1; site >= -N; --site) {
    if (!std::binary_search(h.rbegin(), h.rend(), site)) ++holes_neg;
  }
  return holes_neg - particles_nonneg;
}

BosonConfig::BosonConfig(std::vector<Count> p) : parts(std::move(p)) {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 0) throw ValidationError("Boson parts must be nonnegative");
    if (i > 0 && parts[i] > parts[i - 1]) throw ValidationError("Boson parts must be weakly decreasing");
  }
}

std::string BosonConfig::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts[i]);
  }
  return s;
}

BosonConfig BosonConfig::parse(const std::string& text) {
  std::vector<Count> parts;
  std::string t = trim_space(text);
  if (!t.empty())
    for (const auto& item : split(t, ',')) parts.push_back(parse_integer(item));
  return BosonConfig(std::move(parts));
}

StackState::StackState(const BosonConfig& config) {
  for (Count p : config.parts) {
    if (p >= static_cast<Count>(counts_.size())) counts_.resize(p + 1, 0);
    ++counts_[p];
  }
}

Count StackState::occupancy(Count site) const {
  if (site < 0 || site >= static_cast<Count>(counts_.size())) return 0;
  return counts_[site];
}

void StackState::set(Count site, Count count) {
  if (site < 0 || count < 0) throw DomainError("StackState: negative site or count");
  if (site >= static_cast<Count>(counts_.size())) counts_.resize(site + 1, 0);
  counts_[site] = count;
  trim();
}

void StackState::move(Count from, Count to, Count count) {
  if (count == 0) return;
  if (occupancy(from) < count) throw DomainError("StackState: moving more particles than present");
  set(to, occupancy(to) + count);
  set(from, occupancy(from) - count);
}

Count StackState::total() const {
  Count s = 0;
  for (Count c : counts_) s += c;
  return s;
}

Count StackState::top() const { return static_cast<Count>(counts_.size()) - 1; }

void StackState::trim() {
  while (!counts_.empty() && counts_.back() == 0) counts_.pop_back();
}

BosonConfig StackState::to_config() const {
  std::vector<Count> parts;
  for (Count site = top(); site >= 0; --site)
    for (Count c = 0; c < counts_[site]; ++c) parts.push_back(site);
  return BosonConfig(std::move(parts));
}

bool StackState::operator==(const StackState& other) const { return counts_ == other.counts_; }

double duality_H(const ParticleConfig& x, const BosonConfig& n, double q) {
  if (n.parts.empty() || n.parts.back() == 0) return 0.0;
  Count exponent = 0;
  for (Count k : n.parts) exponent += x.position(k) + k;
  return std::pow(q, static_cast<double>(exponent));
}

void to_json(nlohmann::json& j, const ParticleConfig& x) { j = {{"N", x.deviating()}, {"head", x.head()}}; }

void from_json(const nlohmann::json& j, ParticleConfig& x) {
  auto head = j.at("head").get<std::vector<Pos>>();
  if (j.contains("N") && j.at("N").get<Count>() != static_cast<Count>(head.size()))
    throw ValidationError("configuration JSON: N does not match head length");
  x = ParticleConfig(std::move(head));
}

void to_json(nlohmann::json& j, const BosonConfig& n) { j = n.parts; }
void from_json(const nlohmann::json& j, BosonConfig& n) { n = BosonConfig(j.get<std::vector<Count>>()); }

}  // namespace qhahn
