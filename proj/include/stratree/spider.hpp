#pragma once

// The p-leg spider: p half-lines (legs) glued at a common center. The tree space of rooted
// three-leaf trees is the 3-spider, with leg k holding the trees whose outgroup is leaf k.

#include <optional>
#include <string>
#include <vector>

namespace stratree {

class SpiderPoint {
 public:
  static constexpr int kCenter = 0;

  SpiderPoint() = default;  // the center

  static SpiderPoint center() { return {}; }
  // Legs are numbered from 1. A zero coordinate yields the center.
  static SpiderPoint on_leg(int leg, double u);

  int leg() const { return leg_; }
  double u() const { return u_; }
  bool is_center() const { return leg_ == kCenter; }

  friend bool operator==(const SpiderPoint&, const SpiderPoint&) = default;

 private:
  SpiderPoint(int leg, double u) : leg_(leg), u_(u) {}

  int leg_ = kCenter;
  double u_ = 0.0;
};

double spider_distance(const SpiderPoint& x, const SpiderPoint& y);

struct SpiderSample {
  int p = 3;
  std::vector<SpiderPoint> points;
  std::vector<double> weights;  // empty means uniform

  // Throws on legs outside 1..p, negative weights or a size mismatch.
  void validate() const;
  bool uniform() const { return weights.empty(); }
  // Weight of point i after normalizing to total mass 1.
  std::vector<double> normalized_weights() const;
};

// Measure decomposition over the legs: masses w, conditional means nu and moments v = w * nu.
// Index k holds leg k + 1. Samples always summarize to total mass 1; tabulated summaries built
// with from_moments may carry other totals, which the mean location accounts for.
struct SpiderMeasureSummary {
  double w0 = 0.0;
  std::vector<double> w;
  std::vector<double> nu;
  std::vector<double> v;

  static SpiderMeasureSummary from_moments(std::vector<double> w, std::vector<double> nu, double w0 = 0.0);

  int legs() const { return static_cast<int>(w.size()); }
  double total_mass() const;
};

SpiderMeasureSummary summarize(const SpiderSample& sample);

// theta_a = v_a - sum_{b != a} v_b.
double theta(const SpiderMeasureSummary& summary, int leg);
std::vector<double> thetas(const SpiderMeasureSummary& summary);

enum class Verdict { Sticky, Boundary, NonSticky };
std::string to_string(Verdict v);

struct StickinessReport {
  std::vector<double> theta;  // per leg, index k = leg k + 1
  Verdict verdict = Verdict::Sticky;
  int leg = 0;                // leg named by the verdict; 0 for Sticky
  SpiderPoint mean;
  std::optional<double> intrinsic_sd;  // only when computed from a sample
};

double frechet_function(const SpiderPoint& x, const SpiderSample& sample);

// Classifies stickiness and locates the Frechet mean. A leg with theta > tolerance holds the mean;
// max theta within +-tolerance of zero is a boundary case with the mean at the center.
StickinessReport intrinsic_mean(const SpiderSample& sample, double tolerance = 0.0);
StickinessReport intrinsic_mean(const SpiderMeasureSummary& summary, double tolerance = 0.0);

// Net moment E[d(X, candidate) eps(X)] in the direction of `leg`, where eps is -1 when the
// distance to X decreases on moving from the candidate toward that leg. From an interior point of
// leg c, direction c points away from the center and any other leg points toward it.
double net_moment(const SpiderSample& sample, const SpiderPoint& candidate, int leg);

struct SpiderInterval {
  Verdict regime = Verdict::Sticky;
  int leg = 0;              // leg carrying the interval; 0 means the degenerate {center}
  double lower = 0.0;       // coordinates on `leg`, truncated at the center
  double upper = 0.0;
  double estimate = 0.0;    // folded sample mean
  double half_width = 0.0;  // before truncation
  double confidence = 0.95;
  std::string note;
};

// Asymptotic interval for the intrinsic mean following the three stickiness regimes.
SpiderInterval clt_interval(const SpiderSample& sample, double confidence);

}  // namespace stratree
