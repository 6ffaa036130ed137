#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "stratree/errors.hpp"
#include "stratree/spider.hpp"
#include "stratree/stats.hpp"

using namespace stratree;

namespace {

SpiderSample make(int p, const std::vector<std::pair<int, double>>& pts) {
  SpiderSample s;
  s.p = p;
  for (const auto& [leg, u] : pts) s.points.push_back(leg == 0 ? SpiderPoint::center() : SpiderPoint::on_leg(leg, u));
  return s;
}

SpiderMeasureSummary table(const std::array<double, 3>& w, const std::array<double, 3>& nu) {
  return SpiderMeasureSummary::from_moments({w.begin(), w.end()}, {nu.begin(), nu.end()});
}

}  // namespace

TEST_CASE("spider distance") {
  CHECK(spider_distance(SpiderPoint::on_leg(1, 2.0), SpiderPoint::on_leg(1, 0.5)) == 1.5);
  CHECK(spider_distance(SpiderPoint::on_leg(1, 2.0), SpiderPoint::on_leg(3, 0.5)) == 2.5);
  CHECK(spider_distance(SpiderPoint::center(), SpiderPoint::on_leg(2, 0.7)) == 0.7);
  CHECK(SpiderPoint::on_leg(2, 0.0).is_center());
  CHECK_THROWS_AS(SpiderPoint::on_leg(1, -1.0), InvalidPointError);
}

TEST_CASE("spider distance is a metric") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 6);
    auto pick = [&] { return rng() % 5 == 0 ? SpiderPoint::center() : SpiderPoint::on_leg(1 + rng() % p, u(rng)); };
    const auto x = pick(), y = pick(), z = pick();
    CHECK(spider_distance(x, y) == spider_distance(y, x));
    CHECK(spider_distance(x, x) == 0.0);
    CHECK(spider_distance(x, z) <= spider_distance(x, y) + spider_distance(y, z) + 1e-12);
  }
}

TEST_CASE("summaries") {
  const auto s = summarize(make(3, {{1, 3}, {2, 1}, {3, 1}}));
  CHECK(s.w[0] == doctest::Approx(1.0 / 3));
  CHECK(s.nu == std::vector<double>{3, 1, 1});
  CHECK(s.v[0] == doctest::Approx(1.0));
  CHECK(s.v[1] == doctest::Approx(1.0 / 3));

  const auto c = summarize(make(3, {{0, 0}, {0, 0}}));
  CHECK(c.w0 == 1.0);
  for (double v : c.v) CHECK(v == 0.0);
  CHECK_THROWS_AS(summarize(make(3, {})), EmptySampleError);
}

TEST_CASE("frechet function") {
  const auto unit = make(3, {{1, 1}, {2, 1}, {3, 1}});
  CHECK(frechet_function(SpiderPoint::center(), unit) == 1.0);
  CHECK(frechet_function(SpiderPoint::on_leg(1, 1), unit) == doctest::Approx(8.0 / 3));
  const auto s = make(3, {{1, 3}, {2, 1}, {3, 1}});
  CHECK(frechet_function(SpiderPoint::on_leg(1, 1.0 / 3), s) == doctest::Approx(32.0 / 9));
}

TEST_CASE("intrinsic mean examples") {
  auto r = intrinsic_mean(make(3, {{1, 3}, {2, 1}, {3, 1}}));
  CHECK(r.verdict == Verdict::NonSticky);
  CHECK(r.leg == 1);
  CHECK(r.theta[0] == doctest::Approx(1.0 / 3));
  CHECK(r.theta[1] == doctest::Approx(-1.0));
  CHECK(r.mean.u() == doctest::Approx(1.0 / 3));
  const auto g = oracle::spider_grid_min(3, {{1, 3}, {2, 1}, {3, 1}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-4);
  CHECK(g.leg == 1);
  CHECK(*r.intrinsic_sd * *r.intrinsic_sd == doctest::Approx(g.value).epsilon(1e-6));

  r = intrinsic_mean(make(3, {{1, 1}, {2, 1}, {3, 1}}));
  CHECK(r.verdict == Verdict::Sticky);
  CHECK(r.mean.is_center());
  for (double t : r.theta) CHECK(t == doctest::Approx(-1.0 / 3));

  r = intrinsic_mean(make(3, {{1, 2}, {2, 1}, {3, 1}}));
  CHECK(r.verdict == Verdict::Boundary);
  CHECK(r.leg == 1);
  CHECK(r.mean.is_center());
}

TEST_CASE("tabulated summaries") {
  const auto t1 = table({25.0 / 59, 16.0 / 59, 18.0 / 59}, {2.3938, 2.1342, 2.8401});
  auto r = intrinsic_mean(t1);
  CHECK(r.verdict == Verdict::Sticky);
  CHECK(std::abs(r.theta[0] - -0.4) <= 0.05);
  CHECK(std::abs(r.theta[1] - -1.3) <= 0.05);
  CHECK(std::abs(r.theta[2] - -0.7) <= 0.05);

  const auto t2 = table({16.0 / 30, 7.0 / 30, 7.0 / 30}, {1.2474, 0.9424, 0.9395});
  r = intrinsic_mean(t2);
  CHECK(r.verdict == Verdict::NonSticky);
  CHECK(r.leg == 1);
  CHECK(std::abs(r.theta[0] - 0.2) <= 0.05);

  const auto t3 = table({12.0 / 30, 7.0 / 30, 21.0 / 30}, {0.4853, 1.0976, 1.5386});
  r = intrinsic_mean(t3);
  CHECK(r.leg == 3);
  CHECK(std::abs(theta(t3, 3) - 0.6) <= 0.05);

  const auto t4 = table({10.0 / 30, 6.0 / 30, 14.0 / 30}, {1.7743, 0.2151, 2.5628});
  CHECK(std::abs(theta(t4, 2) - -1.7) <= 0.05);
  CHECK(intrinsic_mean(t4).verdict == Verdict::NonSticky);
  CHECK(intrinsic_mean(t4).leg == 3);

  CHECK_THROWS_AS(theta(t4, 4), InputError);
}

TEST_CASE("intrinsic mean agrees with a grid search") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 3 + static_cast<int>(rng() % 3);
    const int n = 1 + static_cast<int>(rng() % 50);
    std::vector<std::pair<int, double>> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(1 + static_cast<int>(rng() % p), u(rng));
    const auto sample = make(p, pts);
    const auto r = intrinsic_mean(sample);
    const auto g = oracle::spider_grid_min(p, pts, std::vector<double>(n, 1.0 / n), 1e-4);
    const double f = frechet_function(r.mean, sample);
    CHECK(std::abs(f - g.value) <= 1e-6);
    CHECK(spider_distance(r.mean, g.leg == 0 ? SpiderPoint::center() : SpiderPoint::on_leg(g.leg, g.u)) <= 1e-3);
    int positive = 0;
    for (double t : r.theta) positive += t > 0.0;
    CHECK(positive <= 1);
  }
}

TEST_CASE("net moment") {
  const auto unit = make(3, {{1, 1}, {2, 1}, {3, 1}});
  for (int a = 1; a <= 3; ++a) CHECK(net_moment(unit, SpiderPoint::center(), a) == doctest::Approx(1.0 / 3));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<int, double>> pts;
    for (int i = 0; i < 12; ++i) pts.emplace_back(1 + static_cast<int>(rng() % 3), u(rng));
    const auto s = make(3, pts);
    const auto r = intrinsic_mean(s);
    for (int a = 1; a <= 3; ++a) CHECK(net_moment(s, SpiderPoint::center(), a) == doctest::Approx(-r.theta[a - 1]));
  }

  const auto one_leg = make(3, {{2, 1}, {2, 3}});
  CHECK(net_moment(one_leg, SpiderPoint::center(), 2) == doctest::Approx(-2.0));

  // At an interior minimizer the outward and inward one-sided derivatives are both zero.
  const auto s = make(3, {{1, 3}, {2, 1}, {3, 1}});
  const auto m = intrinsic_mean(s).mean;
  CHECK(net_moment(s, m, 1) == doctest::Approx(0.0));
  CHECK(net_moment(s, m, 2) == doctest::Approx(0.0));
}

TEST_CASE("clt intervals") {
  // One leg: reduces to the classical interval.
  std::vector<std::pair<int, double>> pts;
  for (int i = 0; i < 100; ++i) pts.emplace_back(1, i % 2 == 0 ? 1.0 : 3.0);
  auto iv = clt_interval(make(3, pts), 0.95);
  CHECK(iv.regime == Verdict::NonSticky);
  CHECK(iv.leg == 1);
  CHECK(iv.estimate == doctest::Approx(2.0));
  const double sd = std::sqrt(100.0 / 99.0);
  CHECK(iv.half_width == doctest::Approx(stats::normal_quantile(0.975) * sd / 10.0));

  iv = clt_interval(make(3, {{1, 1}, {2, 1}, {3, 1}}), 0.95);
  CHECK(iv.regime == Verdict::Sticky);
  CHECK(iv.leg == 0);
  CHECK(iv.lower == 0.0);
  CHECK(iv.upper == 0.0);

  CHECK_THROWS_AS(clt_interval(make(3, {{1, 1}}), 0.95), InsufficientDataError);
}

TEST_CASE("clt interval width matches a bootstrap") {
  // Thirty points shaped like the N. American table: 16/7/7 split with those leg means.
  std::vector<std::pair<int, double>> pts;
  std::mt19937_64 rng(17);
  auto leg_points = [&](int leg, int count, double mean) {
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(mean * (0.4 + 1.2 * i / std::max(1, count - 1)));
    for (double x : xs) pts.emplace_back(leg, x);
  };
  leg_points(1, 16, 1.2474);
  leg_points(2, 7, 0.9424);
  leg_points(3, 7, 0.9395);
  const auto sample = make(3, pts);
  const auto iv = clt_interval(sample, 0.95);
  REQUIRE(iv.regime == Verdict::NonSticky);
  REQUIRE(iv.leg == 1);

  // Percentile bootstrap of the folded mean.
  std::vector<double> boots;
  for (int b = 0; b < 10000; ++b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& [leg, u] = pts[rng() % pts.size()];
      acc += leg == 1 ? u : -u;
    }
    boots.push_back(acc / pts.size());
  }
  std::sort(boots.begin(), boots.end());
  const double width = boots[9749] - boots[249];
  CHECK(2.0 * iv.half_width == doctest::Approx(width).epsilon(0.2));
}
