#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "stratree/errors.hpp"
#include "stratree/json_io.hpp"
#include "stratree/mcsim.hpp"
#include "stratree/stats.hpp"

using namespace stratree;

namespace {

SpiderLaw point_masses(std::vector<double> w) {
  SpiderLaw law;
  law.p = static_cast<int>(w.size());
  law.weights = std::move(w);
  law.legs.assign(law.weights.size(), LegDistribution::point_mass(1.0));
  return law;
}

SpiderLaw symmetric() { return point_masses({1.0 / 3, 1.0 / 3, 1.0 - 2.0 / 3}); }

}  // namespace

TEST_CASE("distributions") {
  CHECK(LegDistribution::uniform(0, 2).mean() == 1.0);
  CHECK(LegDistribution::uniform(0, 2).second_moment() == doctest::Approx(4.0 / 3));
  CHECK(LegDistribution::exponential(2).mean() == 0.5);
  CHECK(LegDistribution::exponential(2).second_moment() == 0.5);
  CHECK_THROWS_AS(LegDistribution::uniform(-1, 2).validate(), InputError);
  CHECK_THROWS_AS(LegDistribution::exponential(0).validate(), InputError);
  Rng rng(1);
  double acc = 0.0;
  for (int i = 0; i < 100000; ++i) acc += LegDistribution::exponential(2).sample(rng);
  CHECK(acc / 100000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("law classification") {
  auto c = classify_law(symmetric());
  CHECK(c.regime == Verdict::Sticky);
  for (double t : c.theta) CHECK(t == doctest::Approx(-1.0 / 3));

  c = classify_law(point_masses({0.6, 0.2, 0.2}));
  CHECK(c.regime == Verdict::NonSticky);
  CHECK(c.leg == 1);
  CHECK(c.theta[0] == doctest::Approx(0.2));

  c = classify_law(point_masses({0.5, 0.25, 0.25}));
  CHECK(c.regime == Verdict::Boundary);
  CHECK(c.theta[0] == 0.0);

  CHECK_THROWS_AS(classify_law(point_masses({0.5, 0.25})), InputError);
}

TEST_CASE("sticky law sticks") {
  const auto r = simulate(symmetric(), 100, 1000, 7);
  CHECK(r.regime == "iii");
  CHECK(r.stick_fraction >= 0.99);
  // The sample mean leaves the center only when one leg takes more than half the draws.
  const double tail = oracle::multinomial_max_tail(100, 3, 51);
  const double sd = std::sqrt(tail * (1 - tail) / 1000);
  CHECK(std::abs((1.0 - r.stick_fraction) - tail) <= 4 * sd + 1e-3);
  CHECK(r.ks.empty());
}

TEST_CASE("multinomial oracle against brute force") {
  // n = 6 draws over 3 legs, some leg gets at least 4.
  int hits = 0, total = 0;
  for (int a = 0; a < 729; ++a) {
    int c[3] = {0, 0, 0};
    for (int k = 0, x = a; k < 6; ++k, x /= 3) ++c[x % 3];
    ++total;
    hits += std::max({c[0], c[1], c[2]}) >= 4;
  }
  CHECK(oracle::multinomial_max_tail(6, 3, 4) == doctest::Approx(static_cast<double>(hits) / total));
}

TEST_CASE("single-leg uniform law is asymptotically normal") {
  SpiderLaw law;
  law.p = 1;
  law.weights = {1.0};
  law.legs = {LegDistribution::uniform(0, 2)};
  const auto c = classify_law(law);
  CHECK(c.sigma * c.sigma == doctest::Approx(1.0 / 3));
  const auto r = simulate(law, 200, 1000, 3);
  CHECK(r.regime == "i");
  REQUIRE(r.ks.size() == 1);
  CHECK(r.ks[0].p_value > 0.01);
}

TEST_CASE("boundary law folds to a half-normal") {
  SpiderLaw law;
  law.p = 3;
  law.weights = {0.5, 0.25, 0.25};
  law.legs.assign(3, LegDistribution::uniform(0, 2));
  const auto r = simulate(law, 200, 1000, 5);
  CHECK(r.regime == "ii");
  REQUIRE(r.ks.size() == 1);
  CHECK(r.ks[0].reference == "half-normal");
  CHECK(r.ks[0].p_value > 0.01);
}

TEST_CASE("n = 1 never sticks") {
  const auto r = simulate(symmetric(), 1, 200, 9);
  CHECK(r.stick_fraction == 0.0);
  Rng rng(mix_seed(9, 0));
  const auto s = draw_sample(symmetric(), 1, rng);
  CHECK(intrinsic_mean(s).mean == s.points[0]);
}

TEST_CASE("seeded determinism") {
  SpiderLaw law = point_masses({0.6, 0.2, 0.2});
  law.legs[0] = LegDistribution::exponential(1.0);
  const auto a = json_io::dump(json_io::to_json(simulate(law, 50, 300, 42)));
  const auto b = json_io::dump(json_io::to_json(simulate(law, 50, 300, 42)));
  CHECK(a == b);
  CHECK(a != json_io::dump(json_io::to_json(simulate(law, 50, 300, 43))));
}

TEST_CASE("stick fraction grows with n") {
  SpiderLaw law;
  law.p = 3;
  law.weights = {0.4, 0.3, 0.3};
  law.legs.assign(3, LegDistribution::uniform(0, 2));
  REQUIRE(classify_law(law).regime == Verdict::Sticky);
  double prev = 0.0;
  for (int n : {10, 30, 100, 300}) {
    const double f = simulate(law, n, 10000, 1).stick_fraction;
    CHECK(f >= prev - 0.01);
    prev = f;
  }
}

TEST_CASE("majority verdicts match the law's regime") {
  std::mt19937_64 rng(77);
  int checked = 0;
  while (checked < 50) {
    SpiderLaw law;
    law.p = 3 + static_cast<int>(rng() % 3);
    double total = 0.0;
    for (int k = 0; k < law.p; ++k) {
      law.weights.push_back(0.05 + std::uniform_real_distribution<double>(0, 1)(rng));
      total += law.weights.back();
      switch (rng() % 3) {
        case 0: law.legs.push_back(LegDistribution::point_mass(std::uniform_real_distribution<double>(0.2, 2)(rng))); break;
        case 1: law.legs.push_back(LegDistribution::uniform(0, std::uniform_real_distribution<double>(0.2, 3)(rng))); break;
        default: law.legs.push_back(LegDistribution::exponential(std::uniform_real_distribution<double>(0.5, 3)(rng)));
      }
    }
    for (double& w : law.weights) w /= total;
    const auto c = classify_law(law);
    // Laws too close to the boundary need far larger n to resolve.
    const double margin = *std::max_element(c.theta.begin(), c.theta.end());
    if (std::abs(margin) < 0.05) continue;
    ++checked;
    const auto r = simulate(law, 10000, 15, 100 + checked);
    const bool predicted_sticky = c.regime == Verdict::Sticky;
    CHECK((r.stick_fraction > 0.5) == predicted_sticky);
  }
}

TEST_CASE("open-book simulations") {
  OpenBookLaw sym;
  sym.weights = {1.0 / 3, 1.0 / 3, 1.0 - 2.0 / 3};
  for (int k = 0; k < 3; ++k) {
    sym.x1[k] = LegDistribution::uniform(0, 2);
    sym.x2[k] = LegDistribution::point_mass(1);
  }
  auto r = simulate_openbook(sym, 100, 1000, 1);
  CHECK(r.regime == "spine");
  CHECK(r.stick_fraction >= 0.99);
  REQUIRE(r.ks.size() == 1);
  CHECK(r.ks[0].p_value > 0.01);

  OpenBookLaw one;
  one.weights = {1, 0, 0};
  one.x1 = {LegDistribution::uniform(0, 2), LegDistribution::point_mass(0), LegDistribution::point_mass(0)};
  one.x2 = {LegDistribution::exponential(1), LegDistribution::point_mass(0), LegDistribution::point_mass(0)};
  r = simulate_openbook(one, 100, 1000, 2);
  CHECK(r.regime == "leaf");
  CHECK(r.stick_fraction == 0.0);
  REQUIRE(r.ks.size() == 2);
  CHECK(r.ks[0].p_value > 0.01);
  CHECK(r.ks[1].p_value > 0.01);

  OpenBookLaw flat = sym;
  for (int k = 0; k < 3; ++k) flat.x1[k] = LegDistribution::point_mass(1);
  r = simulate_openbook(flat, 50, 100, 3);
  CHECK(r.degenerate);
  CHECK(r.ks.empty());
}

TEST_CASE("spine interval coverage") {
  OpenBookLaw sym;
  sym.weights = {1.0 / 3, 1.0 / 3, 1.0 - 2.0 / 3};
  for (int k = 0; k < 3; ++k) {
    sym.x1[k] = LegDistribution::exponential(1.0 + k);
    sym.x2[k] = LegDistribution::uniform(0.5, 1.5);
  }
  const auto c = spine_clt_coverage(sym, 100, 2000, 11);
  CHECK(c.coverage >= 0.93);
  CHECK(c.coverage <= 0.97);
}

TEST_CASE("KS helpers") {
  std::vector<double> xs;
  for (int i = 1; i <= 999; ++i) xs.push_back(stats::normal_quantile(i / 1000.0));
  CHECK(stats::ks_statistic(xs, stats::normal_cdf) <= 0.002);
  CHECK(stats::ks_p_value(0.0, 100) == doctest::Approx(1.0));
  CHECK(stats::ks_p_value(0.5, 100) < 1e-10);
  // Critical value at alpha = 0.05 for large n is about 1.358 / sqrt(n).
  CHECK(stats::ks_p_value(1.358 / std::sqrt(1000.0), 1000) == doctest::Approx(0.05).epsilon(0.05));
}
