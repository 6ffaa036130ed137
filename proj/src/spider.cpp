#include "stratree/spider.hpp"

#include <algorithm>
#include <cmath>

#include "stratree/errors.hpp"
#include "stratree/stats.hpp"

namespace stratree {

SpiderPoint SpiderPoint::on_leg(int leg, double u) {
  if (!std::isfinite(u) || u < 0.0) throw InvalidPointError("spider coordinate must be finite and nonnegative");
  if (u == 0.0) return center();
  if (leg < 1) throw InvalidPointError("spider legs are numbered from 1");
  return SpiderPoint(leg, u);
}

double spider_distance(const SpiderPoint& x, const SpiderPoint& y) {
  if (x.leg() == y.leg()) return std::abs(x.u() - y.u());
  return x.u() + y.u();
}

void SpiderSample::validate() const {
  if (p < 1) throw InputError("spider needs at least one leg");
  for (const auto& pt : points) {
    if (pt.leg() > p) {
      throw InvalidPointError("point on leg " + std::to_string(pt.leg()) + " of a " + std::to_string(p) + "-spider");
    }
  }
  if (!weights.empty()) {
    if (weights.size() != points.size()) throw InputError("weights and points differ in length");
    double total = 0.0;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw InputError("weights sum to zero");
  }
}

std::vector<double> SpiderSample::normalized_weights() const {
  const std::size_t n = points.size();
  if (weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out(weights);
  for (double& w : out) w /= total;
  return out;
}

namespace {

void require_nonempty(const SpiderSample& sample) {
  sample.validate();
  if (sample.points.empty()) throw EmptySampleError("empty spider sample");
}

// sum_i w_i f(i), accumulated unweighted and divided by n for uniform samples so that
// integer-valued inputs give exact results.
template <typename F>
double weighted_sum(const SpiderSample& sample, F&& f) {
  double acc = 0.0;
  if (sample.uniform()) {
    for (std::size_t i = 0; i < sample.points.size(); ++i) acc += f(i);
    return acc / static_cast<double>(sample.points.size());
  }
  const auto w = sample.normalized_weights();
  for (std::size_t i = 0; i < sample.points.size(); ++i) acc += w[i] * f(i);
  return acc;
}

double signed_coordinate(const SpiderPoint& x, int leg) { return x.leg() == leg ? x.u() : -x.u(); }

}  // namespace

SpiderMeasureSummary SpiderMeasureSummary::from_moments(std::vector<double> w, std::vector<double> nu, double w0) {
  if (w.size() != nu.size()) throw InputError("w and nu must have one entry per leg");
  if (!std::isfinite(w0) || w0 < 0.0) throw InputError("center mass must be nonnegative");
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!std::isfinite(w[k]) || w[k] < 0.0) throw InputError("leg masses must be nonnegative");
    if (!std::isfinite(nu[k]) || nu[k] < 0.0) throw InputError("leg means must be nonnegative");
  }
  SpiderMeasureSummary s;
  s.w0 = w0;
  s.w = std::move(w);
  s.nu = std::move(nu);
  s.v.resize(s.w.size());
  for (std::size_t k = 0; k < s.w.size(); ++k) s.v[k] = s.w[k] * s.nu[k];
  return s;
}

double SpiderMeasureSummary::total_mass() const {
  double total = w0;
  for (double x : w) total += x;
  return total;
}

SpiderMeasureSummary summarize(const SpiderSample& sample) {
  require_nonempty(sample);
  // Accumulate raw weights and divide once, so uniform samples give exact count/n masses.
  const std::vector<double> weights =
      sample.uniform() ? std::vector<double>(sample.points.size(), 1.0) : sample.weights;
  double total = 0.0;
  for (double w : weights) total += w;
  const auto p = static_cast<std::size_t>(sample.p);
  std::vector<double> mass(p, 0.0), moment(p, 0.0);
  double center_mass = 0.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const auto& pt = sample.points[i];
    if (pt.is_center()) {
      center_mass += weights[i];
    } else {
      mass[pt.leg() - 1] += weights[i];
      moment[pt.leg() - 1] += weights[i] * pt.u();
    }
  }
  SpiderMeasureSummary s;
  s.w0 = center_mass / total;
  s.nu.resize(p);
  for (std::size_t k = 0; k < p; ++k) s.nu[k] = mass[k] > 0.0 ? moment[k] / mass[k] : 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    mass[k] /= total;
    moment[k] /= total;
  }
  s.w = mass;
  s.v = moment;
  return s;
}

double theta(const SpiderMeasureSummary& summary, int leg) {
  if (leg < 1 || leg > summary.legs()) throw InputError("leg " + std::to_string(leg) + " out of range");
  double others = 0.0;
  for (int b = 1; b <= summary.legs(); ++b) {
    if (b != leg) others += summary.v[b - 1];
  }
  return summary.v[leg - 1] - others;
}

std::vector<double> thetas(const SpiderMeasureSummary& summary) {
  std::vector<double> out;
  for (int a = 1; a <= summary.legs(); ++a) out.push_back(theta(summary, a));
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Sticky: return "Sticky";
    case Verdict::Boundary: return "Boundary";
    case Verdict::NonSticky: return "NonSticky";
  }
  return "?";
}

double frechet_function(const SpiderPoint& x, const SpiderSample& sample) {
  require_nonempty(sample);
  return weighted_sum(sample, [&](std::size_t i) {
    const double d = spider_distance(x, sample.points[i]);
    return d * d;
  });
}

namespace {

// Shared by the sample and summary paths; `mass` is the x^2 coefficient of the Frechet function.
StickinessReport classify(std::vector<double> th, double mass, double tolerance) {
  if (tolerance < 0.0) throw InputError("tolerance must be nonnegative");
  StickinessReport report;
  report.theta = std::move(th);
  const auto best = std::max_element(report.theta.begin(), report.theta.end());
  const int leg = static_cast<int>(best - report.theta.begin()) + 1;
  if (*best > tolerance) {
    report.verdict = Verdict::NonSticky;
    report.leg = leg;
    report.mean = SpiderPoint::on_leg(leg, *best / mass);
  } else if (*best >= -tolerance) {
    report.verdict = Verdict::Boundary;
    report.leg = leg;
  } else {
    report.verdict = Verdict::Sticky;
  }
  return report;
}

}  // namespace

StickinessReport intrinsic_mean(const SpiderSample& sample, double tolerance) {
  require_nonempty(sample);
  std::vector<double> th;
  for (int a = 1; a <= sample.p; ++a) {
    th.push_back(weighted_sum(sample, [&](std::size_t i) { return signed_coordinate(sample.points[i], a); }));
  }
  auto report = classify(std::move(th), 1.0, tolerance);
  report.intrinsic_sd = std::sqrt(frechet_function(report.mean, sample));
  return report;
}

StickinessReport intrinsic_mean(const SpiderMeasureSummary& summary, double tolerance) {
  if (summary.legs() < 1) throw EmptySampleError("summary has no legs");
  const double mass = summary.total_mass();
  if (!(mass > 0.0)) throw EmptySampleError("summary carries no mass");
  return classify(thetas(summary), mass, tolerance);
}

double net_moment(const SpiderSample& sample, const SpiderPoint& candidate, int leg) {
  require_nonempty(sample);
  if (leg < 1 || leg > sample.p) throw InputError("leg " + std::to_string(leg) + " out of range");
  if (candidate.leg() > sample.p) throw InvalidPointError("candidate is not on this spider");
  return weighted_sum(sample, [&](std::size_t i) {
    const SpiderPoint& x = sample.points[i];
    if (candidate.is_center()) {
      // Moving into `leg` shortens the distance only to points on that leg.
      return x.leg() == leg ? -x.u() : x.u();
    }
    const double d = spider_distance(x, candidate);
    const bool beyond = x.leg() == candidate.leg() && x.u() > candidate.u();
    const bool outward = leg == candidate.leg();
    // Outward: only points farther out on the candidate's leg get closer. Inward: every point
    // except those farther out gets closer.
    const double eps = outward ? (beyond ? -1.0 : 1.0) : (beyond ? 1.0 : -1.0);
    return eps * d;
  });
}

SpiderInterval clt_interval(const SpiderSample& sample, double confidence) {
  require_nonempty(sample);
  if (sample.points.size() < 2) throw InsufficientDataError("an interval needs at least two points");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InputError("confidence must lie in (0, 1)");

  const auto report = intrinsic_mean(sample, 0.0);
  SpiderInterval out;
  out.regime = report.verdict;
  out.confidence = confidence;
  if (report.verdict == Verdict::Sticky) {
    out.note = "sample intrinsic mean is the center; it stays there almost surely for large n";
    return out;
  }

  // Fold every other leg onto the half-line opposite `leg` and use the classical CLT there.
  const int leg = report.leg;
  const double n = static_cast<double>(sample.points.size());
  const double mean = report.theta[leg - 1];
  const double var = weighted_sum(sample, [&](std::size_t i) {
    const double y = signed_coordinate(sample.points[i], leg) - mean;
    return y * y;
  }) * n / (n - 1.0);
  const double half = stats::normal_quantile(0.5 + confidence / 2.0) * std::sqrt(var / n);

  out.leg = leg;
  out.estimate = mean;
  out.half_width = half;
  if (report.verdict == Verdict::NonSticky) {
    out.lower = std::max(0.0, mean - half);
    out.upper = mean + half;
    out.note = out.lower == 0.0 ? "normal interval on the folded leg, truncated at the center"
                                : "normal interval on the folded leg";
  } else {
    out.lower = 0.0;
    out.upper = half;
    out.note = "boundary case: half-normal limit of the folded mean";
  }
  return out;
}

}  // namespace stratree
