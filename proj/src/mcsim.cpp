#include "stratree/mcsim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "stratree/errors.hpp"
#include "stratree/parallel.hpp"
#include "stratree/stats.hpp"

namespace stratree {

LegDistribution LegDistribution::point_mass(double u) { return {Kind::PointMass, u, 0.0}; }
LegDistribution LegDistribution::uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
LegDistribution LegDistribution::exponential(double rate) { return {Kind::Exponential, rate, 0.0}; }

void LegDistribution::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("distribution parameters must be finite");
  switch (kind) {
    case Kind::PointMass:
      if (a < 0.0) throw InputError("point mass must sit at a nonnegative coordinate");
      break;
    case Kind::Uniform:
      if (a < 0.0 || b < a) throw InputError("uniform support must satisfy 0 <= lo <= hi");
      break;
    case Kind::Exponential:
      if (!(a > 0.0)) throw InputError("exponential rate must be positive");
      break;
  }
}

double LegDistribution::mean() const {
  switch (kind) {
    case Kind::PointMass: return a;
    case Kind::Uniform: return (a + b) / 2.0;
    case Kind::Exponential: return 1.0 / a;
  }
  return 0.0;
}

double LegDistribution::second_moment() const {
  switch (kind) {
    case Kind::PointMass: return a * a;
    case Kind::Uniform: return (a * a + a * b + b * b) / 3.0;
    case Kind::Exponential: return 2.0 / (a * a);
  }
  return 0.0;
}

double LegDistribution::sample(Rng& rng) const {
  switch (kind) {
    case Kind::PointMass: return a;
    case Kind::Uniform: return a + (b - a) * uniform01(rng);
    case Kind::Exponential: return -std::log1p(-uniform01(rng)) / a;
  }
  return 0.0;
}

namespace {

void check_weights(const double* w, std::size_t count) {
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::isfinite(w[k]) || w[k] < 0.0) throw InputError("law weights must be nonnegative");
    total += w[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("law weights must sum to 1");
}

// Index drawn from a discrete distribution whose weights sum to 1.
std::size_t draw_index(const double* w, std::size_t count, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    acc += w[k];
    if (u < acc && w[k] > 0.0) return k;
  }
  std::size_t last = count - 1;
  while (last > 0 && w[last] == 0.0) --last;
  return last;
}

double ks_sqrt(int n) { return std::sqrt(static_cast<double>(n)); }

KsResult run_ks(std::string coordinate, const std::vector<double>& values, bool half) {
  KsResult r;
  r.coordinate = std::move(coordinate);
  r.reference = half ? "half-normal" : "normal";
  r.statistic = half ? stats::ks_statistic(values, stats::half_normal_cdf) : stats::ks_statistic(values, stats::normal_cdf);
  r.p_value = stats::ks_p_value(r.statistic, values.size());
  return r;
}

void check_sizes(int n, int replications) {
  if (n < 1) throw InputError("sample size must be at least 1");
  if (replications < 1) throw InputError("replications must be at least 1");
}

}  // namespace

void SpiderLaw::validate() const {
  if (p < 1) throw InputError("a spider law needs at least one leg");
  if (weights.size() != static_cast<std::size_t>(p) || legs.size() != static_cast<std::size_t>(p)) {
    throw InputError("a spider law needs one weight and one distribution per leg");
  }
  check_weights(weights.data(), weights.size());
  for (const auto& leg : legs) leg.validate();
}

LawClassification classify_law(const SpiderLaw& law, double tolerance) {
  law.validate();
  double second = 0.0;
  for (int k = 0; k < law.p; ++k) second += law.weights[k] * law.legs[k].second_moment();
  const auto summary = SpiderMeasureSummary::from_moments(law.weights, [&] {
    std::vector<double> nu(law.p);
    for (int k = 0; k < law.p; ++k) nu[k] = law.legs[k].mean();
    return nu;
  }());
  LawClassification c;
  c.theta = thetas(summary);
  const auto best = std::max_element(c.theta.begin(), c.theta.end());
  c.leg = static_cast<int>(best - c.theta.begin()) + 1;
  if (*best > tolerance) {
    c.regime = Verdict::NonSticky;
  } else if (*best >= -tolerance) {
    c.regime = Verdict::Boundary;
  } else {
    c.regime = Verdict::Sticky;
  }
  const double folded_mean = c.regime == Verdict::NonSticky ? *best : 0.0;
  c.sigma = std::sqrt(std::max(0.0, second - folded_mean * folded_mean));
  return c;
}

std::string regime_label(Verdict regime) {
  switch (regime) {
    case Verdict::NonSticky: return "i";
    case Verdict::Boundary: return "ii";
    case Verdict::Sticky: return "iii";
  }
  return "?";
}

SpiderSample draw_sample(const SpiderLaw& law, int n, Rng& rng) {
  SpiderSample s;
  s.p = law.p;
  s.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = draw_index(law.weights.data(), law.weights.size(), rng);
    s.points.push_back(SpiderPoint::on_leg(static_cast<int>(k) + 1, law.legs[k].sample(rng)));
  }
  return s;
}

SimReport simulate(const SpiderLaw& law, int n, int replications, std::uint64_t seed) {
  check_sizes(n, replications);
  const auto start = std::chrono::steady_clock::now();
  const LawClassification cls = classify_law(law);
  const int a = cls.leg;

  std::vector<char> stuck(replications, 0);
  std::vector<double> stat(replications, 0.0);
  parallel_for(static_cast<std::size_t>(replications), [&](std::size_t r) {
    Rng rng(mix_seed(seed, r));
    const SpiderSample sample = draw_sample(law, n, rng);
    const StickinessReport rep = intrinsic_mean(sample, 0.0);
    stuck[r] = rep.mean.is_center();
    if (cls.sigma <= 0.0) return;
    if (cls.regime == Verdict::NonSticky) {
      const double z = rep.mean.is_center() ? 0.0 : rep.mean.leg() == a ? rep.mean.u() : -rep.mean.u();
      stat[r] = ks_sqrt(n) * (z - cls.theta[a - 1]) / cls.sigma;
    } else if (cls.regime == Verdict::Boundary) {
      stat[r] = ks_sqrt(n) * std::abs(rep.theta[a - 1]) / cls.sigma;
    }
  });

  SimReport report;
  report.regime = regime_label(cls.regime);
  report.n = n;
  report.replications = replications;
  report.seed = seed;
  report.stick_fraction =
      static_cast<double>(std::count(stuck.begin(), stuck.end(), 1)) / static_cast<double>(replications);
  if (cls.regime != Verdict::Sticky) {
    if (cls.sigma <= 0.0) {
      report.degenerate = true;
    } else {
      report.ks.push_back(run_ks("leg " + std::to_string(a), stat, cls.regime == Verdict::Boundary));
    }
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void OpenBookLaw::validate() const {
  check_weights(weights.data(), weights.size());
  for (int k = 0; k < 3; ++k) {
    x1[k].validate();
    x2[k].validate();
  }
}

double OpenBookLaw::x1_mean() const {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m += weights[k] * x1[k].mean();
  return m;
}

double OpenBookLaw::x1_sd() const {
  double second = 0.0;
  for (int k = 0; k < 3; ++k) second += weights[k] * x1[k].second_moment();
  const double m = x1_mean();
  return std::sqrt(std::max(0.0, second - m * m));
}

std::array<double, 3> OpenBookLaw::theta2() const {
  std::array<double, 3> v{}, th{};
  for (int k = 0; k < 3; ++k) v[k] = weights[k] * x2[k].mean();
  for (int k = 0; k < 3; ++k) th[k] = v[k] - (v[0] + v[1] + v[2] - v[k]);
  return th;
}

OpenBookSample draw_sample(const OpenBookLaw& law, int n, Rng& rng) {
  OpenBookSample s;
  s.points.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = draw_index(law.weights.data(), 3, rng);
    const double x1 = law.x1[k].sample(rng);
    const double x2 = law.x2[k].sample(rng);
    s.points.push_back(OpenBookPoint::on_leaf(static_cast<int>(k) + 1, x1, x2));
  }
  return s;
}

SimReport simulate_openbook(const OpenBookLaw& law, int n, int replications, std::uint64_t seed) {
  check_sizes(n, replications);
  law.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto th = law.theta2();
  const int a = static_cast<int>(std::max_element(th.begin(), th.end()) - th.begin()) + 1;
  const double best = th[a - 1];
  constexpr double tol = 1e-12;
  const bool on_leaf = best > tol;

  const double mu1 = law.x1_mean();
  const double sd1 = law.x1_sd();
  double sd2 = 0.0;
  if (on_leaf) {
    double second = 0.0;
    for (int k = 0; k < 3; ++k) second += law.weights[k] * law.x2[k].second_moment();
    sd2 = std::sqrt(std::max(0.0, second - best * best));
  }

  std::vector<char> stuck(replications, 0);
  std::vector<double> s1(replications, 0.0), s2(replications, 0.0);
  parallel_for(static_cast<std::size_t>(replications), [&](std::size_t r) {
    Rng rng(mix_seed(seed, r));
    const auto rep = openbook_mean(draw_sample(law, n, rng), 0.0);
    stuck[r] = rep.mean.on_spine();
    if (sd1 > 0.0) s1[r] = ks_sqrt(n) * (rep.x1_star - mu1) / sd1;
    if (on_leaf && sd2 > 0.0) {
      const double z = rep.mean.on_spine() ? 0.0 : rep.mean.leaf() == a ? rep.mean.x2() : -rep.mean.x2();
      s2[r] = ks_sqrt(n) * (z - best) / sd2;
    }
  });

  SimReport report;
  report.regime = on_leaf ? "leaf" : best >= -tol ? "boundary" : "spine";
  report.n = n;
  report.replications = replications;
  report.seed = seed;
  report.stick_fraction =
      static_cast<double>(std::count(stuck.begin(), stuck.end(), 1)) / static_cast<double>(replications);
  if (sd1 > 0.0) {
    report.ks.push_back(run_ks("x1", s1, false));
  } else {
    report.degenerate = true;
  }
  if (on_leaf) {
    if (sd2 > 0.0) {
      report.ks.push_back(run_ks("x2 leaf " + std::to_string(a), s2, false));
    } else {
      report.degenerate = true;
    }
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CoverageReport spine_clt_coverage(const OpenBookLaw& law, int n, int replications, std::uint64_t seed,
                                  double confidence) {
  if (n < 2) throw InputError("coverage needs samples of size at least 2");
  check_sizes(n, replications);
  law.validate();
  const double mu1 = law.x1_mean();
  std::vector<char> hit(replications, 0), off(replications, 0);
  parallel_for(static_cast<std::size_t>(replications), [&](std::size_t r) {
    Rng rng(mix_seed(seed, r));
    const OpenBookSample sample = draw_sample(law, n, rng);
    try {
      const SpineInterval iv = spine_clt(sample, confidence);
      hit[r] = iv.lower <= mu1 && mu1 <= iv.upper;
    } catch (const WrongRegimeError&) {
      off[r] = 1;
    }
  });
  CoverageReport c;
  c.replications = replications;
  c.covered = static_cast<int>(std::count(hit.begin(), hit.end(), 1));
  c.off_spine = static_cast<int>(std::count(off.begin(), off.end(), 1));
  c.coverage = static_cast<double>(c.covered) / static_cast<double>(replications);
  return c;
}

}  // namespace stratree
