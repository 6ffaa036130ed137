#pragma once

// The open book with three leaves: three closed quadrants glued along a common half-line, the
// spine. Each point carries a spine coordinate x1 and an off-spine coordinate x2.

#include <array>
#include <string>
#include <vector>

namespace stratree {

class OpenBookPoint {
 public:
  static constexpr int kSpine = 0;

  OpenBookPoint() = default;  // spine origin

  static OpenBookPoint spine(double x1);
  // Leaves are 1..3; x2 == 0 yields a spine point.
  static OpenBookPoint on_leaf(int leaf, double x1, double x2);

  int leaf() const { return leaf_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }
  bool on_spine() const { return leaf_ == kSpine; }

  friend bool operator==(const OpenBookPoint&, const OpenBookPoint&) = default;

 private:
  OpenBookPoint(int leaf, double x1, double x2) : leaf_(leaf), x1_(x1), x2_(x2) {}

  int leaf_ = kSpine;
  double x1_ = 0.0;
  double x2_ = 0.0;
};

// Points on different leaves are compared after reflecting one across the spine.
double openbook_distance(const OpenBookPoint& x, const OpenBookPoint& y);

struct OpenBookSample {
  std::vector<OpenBookPoint> points;
  std::vector<double> weights;  // empty means uniform

  void validate() const;
  bool uniform() const { return weights.empty(); }
  std::vector<double> normalized_weights() const;
};

enum class SpineVerdict { StuckToSpine, Boundary, NonSticky };
std::string to_string(SpineVerdict v);

struct SpineStickinessReport {
  double x1_star = 0.0;
  std::array<double, 3> theta2{};  // per leaf: v_a - sum_{i != a} v_i of the x2 moments
  SpineVerdict verdict = SpineVerdict::StuckToSpine;
  int leaf = 0;                    // leaf named by the verdict; 0 when stuck
  OpenBookPoint mean;
  double spine_sd = 0.0;           // population sd of the x1 projections
  double intrinsic_sd = 0.0;       // sqrt of the minimized Frechet value
};

double openbook_frechet(const OpenBookPoint& x, const OpenBookSample& sample);

SpineStickinessReport openbook_mean(const OpenBookSample& sample, double tolerance = 0.0);

struct SpineInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double half_width = 0.0;
  double confidence = 0.95;
};

// Normal interval for the spine coordinate of a mean stuck to the spine. Throws WrongRegimeError
// when the sample mean lies off the spine.
SpineInterval spine_clt(const OpenBookSample& sample, double confidence);

}  // namespace stratree
