#include "stratree/openbook.hpp"

#include <algorithm>
#include <cmath>

#include "stratree/errors.hpp"
#include "stratree/stats.hpp"

namespace stratree {

OpenBookPoint OpenBookPoint::spine(double x1) { return on_leaf(kSpine, x1, 0.0); }

OpenBookPoint OpenBookPoint::on_leaf(int leaf, double x1, double x2) {
  if (!std::isfinite(x1) || !std::isfinite(x2) || x1 < 0.0 || x2 < 0.0) {
    throw InvalidPointError("open-book coordinates must be finite and nonnegative");
  }
  if (x2 == 0.0) return OpenBookPoint(kSpine, x1, 0.0);
  if (leaf < 1 || leaf > 3) throw InvalidPointError("open-book leaves are numbered 1..3");
  return OpenBookPoint(leaf, x1, x2);
}

double openbook_distance(const OpenBookPoint& x, const OpenBookPoint& y) {
  const double dx1 = x.x1() - y.x1();
  const bool same_page = x.leaf() == y.leaf() || x.on_spine() || y.on_spine();
  const double dx2 = same_page ? x.x2() - y.x2() : x.x2() + y.x2();
  return std::hypot(dx1, dx2);
}

void OpenBookSample::validate() const {
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

std::vector<double> OpenBookSample::normalized_weights() const {
  const std::size_t n = points.size();
  if (weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out(weights);
  for (double& w : out) w /= total;
  return out;
}

std::string to_string(SpineVerdict v) {
  switch (v) {
    case SpineVerdict::StuckToSpine: return "StuckToSpine";
    case SpineVerdict::Boundary: return "Boundary";
    case SpineVerdict::NonSticky: return "NonSticky";
  }
  return "?";
}

namespace {

void require_nonempty(const OpenBookSample& sample) {
  sample.validate();
  if (sample.points.empty()) throw EmptySampleError("empty open-book sample");
}

template <typename F>
double weighted_sum(const OpenBookSample& sample, F&& f) {
  double acc = 0.0;
  if (sample.uniform()) {
    for (std::size_t i = 0; i < sample.points.size(); ++i) acc += f(i);
    return acc / static_cast<double>(sample.points.size());
  }
  const auto w = sample.normalized_weights();
  for (std::size_t i = 0; i < sample.points.size(); ++i) acc += w[i] * f(i);
  return acc;
}

}  // namespace

double openbook_frechet(const OpenBookPoint& x, const OpenBookSample& sample) {
  require_nonempty(sample);
  return weighted_sum(sample, [&](std::size_t i) {
    const double d = openbook_distance(x, sample.points[i]);
    return d * d;
  });
}

SpineStickinessReport openbook_mean(const OpenBookSample& sample, double tolerance) {
  require_nonempty(sample);
  if (tolerance < 0.0) throw InputError("tolerance must be nonnegative");
  SpineStickinessReport r;
  r.x1_star = weighted_sum(sample, [&](std::size_t i) { return sample.points[i].x1(); });
  for (int a = 1; a <= 3; ++a) {
    r.theta2[a - 1] = weighted_sum(sample, [&](std::size_t i) {
      const auto& pt = sample.points[i];
      return pt.leaf() == a ? pt.x2() : -pt.x2();
    });
  }
  const auto best = std::max_element(r.theta2.begin(), r.theta2.end());
  const int leaf = static_cast<int>(best - r.theta2.begin()) + 1;
  if (*best > tolerance) {
    r.verdict = SpineVerdict::NonSticky;
    r.leaf = leaf;
    r.mean = OpenBookPoint::on_leaf(leaf, r.x1_star, *best);
  } else {
    r.verdict = *best >= -tolerance ? SpineVerdict::Boundary : SpineVerdict::StuckToSpine;
    r.leaf = r.verdict == SpineVerdict::Boundary ? leaf : 0;
    r.mean = OpenBookPoint::spine(r.x1_star);
  }
  r.spine_sd = std::sqrt(weighted_sum(sample, [&](std::size_t i) {
    const double d = sample.points[i].x1() - r.x1_star;
    return d * d;
  }));
  r.intrinsic_sd = std::sqrt(openbook_frechet(r.mean, sample));
  return r;
}

SpineInterval spine_clt(const OpenBookSample& sample, double confidence) {
  require_nonempty(sample);
  if (sample.points.size() < 2) throw InsufficientDataError("an interval needs at least two points");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InputError("confidence must lie in (0, 1)");
  const auto report = openbook_mean(sample, 0.0);
  if (report.verdict == SpineVerdict::NonSticky) {
    throw WrongRegimeError("sample mean lies on leaf " + std::to_string(report.leaf) + ", not on the spine");
  }
  const double n = static_cast<double>(sample.points.size());
  const double var = report.spine_sd * report.spine_sd * n / (n - 1.0);
  SpineInterval out;
  out.confidence = confidence;
  out.estimate = report.x1_star;
  out.half_width = stats::normal_quantile(0.5 + confidence / 2.0) * std::sqrt(var / n);
  out.lower = out.estimate - out.half_width;
  out.upper = out.estimate + out.half_width;
  return out;
}

}  // namespace stratree
