#pragma once

// Monte Carlo checks of the limiting laws of sample means on spiders and the open book.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stratree/openbook.hpp"
#include "stratree/random.hpp"
#include "stratree/spider.hpp"

namespace stratree {

// Distribution of a nonnegative coordinate.
struct LegDistribution {
  enum class Kind { PointMass, Uniform, Exponential };
  Kind kind = Kind::PointMass;
  double a = 0.0;  // PointMass: location; Uniform: lower end; Exponential: rate
  double b = 0.0;  // Uniform: upper end

  static LegDistribution point_mass(double u);
  static LegDistribution uniform(double lo, double hi);
  static LegDistribution exponential(double rate);

  void validate() const;
  double mean() const;
  double second_moment() const;
  double sample(Rng& rng) const;
};

// Mixture over the legs of a p-spider with no mass at the center.
struct SpiderLaw {
  int p = 3;
  std::vector<double> weights;
  std::vector<LegDistribution> legs;

  void validate() const;  // weights nonnegative and summing to 1, one distribution per leg
};

// Regime of the population mean: NonSticky is case (i) with the mean inside a leg, Boundary is
// case (ii) with the mean at the center and a zero theta, Sticky is case (iii).
struct LawClassification {
  Verdict regime = Verdict::Sticky;
  int leg = 0;                 // leg with the largest theta
  std::vector<double> theta;
  double sigma = 0.0;          // sd of the coordinate folded toward `leg`
};

LawClassification classify_law(const SpiderLaw& law, double tolerance = 1e-12);
std::string regime_label(Verdict regime);  // "i", "ii" or "iii"

struct KsResult {
  std::string coordinate;
  std::string reference;  // "normal" or "half-normal"
  double statistic = 0.0;
  double p_value = 0.0;
};

struct SimReport {
  std::string regime;   // "i", "ii", "iii"; for the open book "spine", "boundary" or "leaf"
  int n = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  double stick_fraction = 0.0;
  std::vector<KsResult> ks;
  bool degenerate = false;  // a tested coordinate has zero variance, so its test was skipped
  double runtime_seconds = 0.0;
};

// Draws `replications` samples of size n; replicate r uses the seed mix_seed(seed, r).
SimReport simulate(const SpiderLaw& law, int n, int replications, std::uint64_t seed);

SpiderSample draw_sample(const SpiderLaw& law, int n, Rng& rng);

// Mixture over the three leaves of the open book; each leaf has its own spine and off-spine laws.
struct OpenBookLaw {
  std::array<double, 3> weights{};
  std::array<LegDistribution, 3> x1;
  std::array<LegDistribution, 3> x2;

  void validate() const;
  double x1_mean() const;
  double x1_sd() const;
  std::array<double, 3> theta2() const;
};

OpenBookSample draw_sample(const OpenBookLaw& law, int n, Rng& rng);
SimReport simulate_openbook(const OpenBookLaw& law, int n, int replications, std::uint64_t seed);

struct CoverageReport {
  int replications = 0;
  int covered = 0;
  int off_spine = 0;  // replicates whose sample mean left the spine; counted as misses
  double coverage = 0.0;
};

// Fraction of replicates whose spine_clt interval contains the population spine coordinate.
CoverageReport spine_clt_coverage(const OpenBookLaw& law, int n, int replications, std::uint64_t seed,
                                  double confidence = 0.95);

}  // namespace stratree
