#include <doctest.h>

#include "qhahn/configspace.hpp"
#include "qhahn/rng.hpp"

using namespace qhahn;

TEST_CASE("step configuration") {
  const auto s = step_config();
  CHECK(s.position(1) == -1);
  CHECK(s.position(1'000'000) == -1'000'000);
  CHECK(s.gap(1) == kInfinite);
  for (Count n = 2; n < 20; ++n) CHECK(s.gap(n) == 0);
  CHECK(s.deviating() == 0);
  CHECK(s.tail_start() == 1);
  CHECK(balance_defect(s) == 0);
}

TEST_CASE("configuration encoding") {
  ParticleConfig x({3, 1, -3, -4});
  CHECK(x.deviating() == 2);  // trailing step entries trimmed
  CHECK(x.position(3) == -3);
  CHECK(x.gap(2) == 1);
  CHECK(x.gap(3) == 3);
  CHECK(x.to_string() == "2;3,1");
  CHECK(ParticleConfig::parse(x.to_string()) == x);
  CHECK(ParticleConfig::parse("0;") == step_config());
  nlohmann::json j = x;
  CHECK(j.get<ParticleConfig>() == x);
  CHECK_THROWS_AS(ParticleConfig({1, 1}), ValidationError);
  CHECK_THROWS_AS(ParticleConfig({1, -3}), ValidationError);
  CHECK_THROWS_AS(ParticleConfig::parse("2;1"), ValidationError);
}

TEST_CASE("apply_move") {
  const auto s = step_config();
  const auto x = apply_move(s, 1, 3);
  CHECK(x.head() == std::vector<Pos>{3});
  CHECK(x.tail_start() == 2);
  CHECK(apply_move(x, 1, 3) == x);
  CHECK(apply_move(x, 1, -1) == s);
  CHECK_THROWS_AS(apply_move(x, 2, 3), ValidationError);
  CHECK_THROWS_AS(apply_move(x, 2, -3), ValidationError);
}

TEST_CASE("random valid moves keep configurations in Conf_fin") {
  Rng rng = make_stream(5, 1);
  ParticleConfig x;
  for (int it = 0; it < 5000; ++it) {
    const Count n = 1 + static_cast<Count>(uniform01(rng) * 12);
    const Pos lo = x.position(n + 1) + 1;
    const Pos hi = n == 1 ? x.position(1) + 3 : x.position(n - 1) - 1;
    if (hi < lo) continue;
    const Pos target = lo + static_cast<Pos>(uniform01(rng) * static_cast<double>(hi - lo + 1));
    x = apply_move(x, n, target);
    CHECK_NOTHROW(check_particle_positions(x.positions(x.deviating() + 2)));
    CHECK(balance_defect(x) == 0);
    CHECK(ParticleConfig::parse(x.to_string()) == x);
  }
}

TEST_CASE("boson configurations") {
  BosonConfig n({3, 2, 2});
  CHECK(n.to_string() == "3,2,2");
  CHECK(BosonConfig::parse("3,2,2") == n);
  CHECK_THROWS_AS(BosonConfig({1, 2}), ValidationError);
  StackState s(n);
  CHECK(s.occupancy(2) == 2);
  CHECK(s.total() == 3);
  s.move(2, 1, 1);
  CHECK(s.to_config() == BosonConfig({3, 2, 1}));
  nlohmann::json j = n;
  CHECK(j.get<BosonConfig>() == n);
}

TEST_CASE("duality functional") {
  const auto s = step_config();
  CHECK(duality_H(s, BosonConfig({3, 2, 1}), 0.4) == 1.0);
  CHECK(duality_H(s, BosonConfig({2, 0}), 0.4) == 0.0);
  ParticleConfig x({1});
  CHECK(duality_H(x, BosonConfig({1}), 0.5) == doctest::Approx(0.25));
  CHECK(duality_H(x, BosonConfig({1, 1}), 0.5) == doctest::Approx(0.0625));
}
