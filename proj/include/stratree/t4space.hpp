#pragma once

// Tree space of rooted trees on four leaves. Interior edges are named by the cluster of leaves
// they cut off from the root: the 6 pairs and 4 triples of {1,2,3,4}. Two clusters can coexist
// in one tree when they are nested or disjoint; the 15 compatible pairs are the quadrants, and
// the quadrant/axis incidence is the Petersen graph. The space is the Euclidean cone over that
// graph with every edge an arc of angle pi/2.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stratree/openbook.hpp"

namespace stratree {

class Split {
 public:
  static constexpr int kCount = 10;

  Split() = default;  // {1,2}

  // Bit k-1 set for leaf k. Throws InvalidPointError unless the mask has 2 or 3 leaves of 1..4.
  static Split from_mask(unsigned mask);
  static Split from_leaves(const std::vector<int>& leaves);
  static Split from_index(int index);
  // Canonical order: {1,2},{1,3},{1,4},{2,3},{2,4},{3,4},{1,2,3},{1,2,4},{1,3,4},{2,3,4}.
  static const std::array<Split, kCount>& all();

  unsigned mask() const { return mask_; }
  int index() const;
  std::vector<int> leaves() const;
  bool compatible_with(const Split& other) const;
  std::string name() const;  // e.g. "{1,2,3}"

  friend bool operator==(const Split&, const Split&) = default;
  friend auto operator<=>(const Split& a, const Split& b) { return a.index() <=> b.index(); }

 private:
  explicit Split(unsigned mask) : mask_(mask) {}
  unsigned mask_ = 0b0011;
};

// A compatible pair of axes, stored with first.index() < second.index(). Within a quadrant the
// local frame puts `first` at angle 0 and `second` at angle pi/2.
struct Quadrant {
  Split first;
  Split second;
  bool contains(const Split& s) const { return s == first || s == second; }
};

std::vector<Quadrant> enumerate_quadrants();

class T4Point {
 public:
  using Coord = std::pair<Split, double>;

  T4Point() = default;  // the star tree

  // Drops zero lengths; throws InvalidPointError on negative or non-finite lengths, repeated
  // splits, more than two splits or an incompatible pair.
  static T4Point make(std::vector<Coord> coords);

  const std::vector<Coord>& coords() const { return coords_; }  // sorted by split index
  std::size_t dimension() const { return coords_.size(); }
  bool is_origin() const { return coords_.empty(); }
  double length(const Split& s) const;
  double norm() const;

  friend bool operator==(const T4Point&, const T4Point&) = default;

 private:
  std::vector<Coord> coords_;
};

enum class Stratum { Origin, OneD, Top2D };
std::string to_string(Stratum s);
Stratum stratum_of(const T4Point& x);

double t4_distance(const T4Point& x, const T4Point& y);

// Point at fraction t of the arclength from x to y along the geodesic.
T4Point geodesic_point(const T4Point& x, const T4Point& y, double t);

struct T4Sample {
  std::vector<T4Point> points;
  std::vector<double> weights;  // empty means uniform

  void validate() const;
  std::vector<double> normalized_weights() const;
};

double t4_frechet(const T4Point& x, const T4Sample& sample);

struct T4MeanOptions {
  int epochs = 50;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
};

struct T4MeanDiagnostics {
  double frechet_value = 0.0;
  double last_epoch_movement = 0.0;  // of the inductive estimate
  int epochs_run = 0;
  bool converged = false;            // inductive movement fell below the tolerance
  double refinement_shift = 0.0;     // distance moved by the per-quadrant refinement
};

struct T4MeanResult {
  T4Point mean;
  T4MeanDiagnostics diagnostics;
};

// Inductive mean over seeded reshuffles, followed by an exact convex minimization of the Frechet
// function on every closed quadrant; the better of the two is returned.
T4MeanResult t4_mean(const T4Sample& sample, const T4MeanOptions& options = {});

// Maps a sample confined to the three quadrants around `axis` onto the open book: x1 is the
// coordinate on `axis`, x2 the other coordinate, and leaves follow the other axis' index order.
OpenBookSample to_open_book(const T4Sample& sample, const Split& axis);
SpineStickinessReport spine_stickiness_t4(const T4Sample& sample, const Split& axis, double tolerance = 0.0);

// Central projection onto the Petersen graph: a vertex (to empty) or a point on the edge
// from -> to at angle fraction s, plus the radius.
struct PetersenCoordinate {
  Split from;
  std::optional<Split> to;
  double s = 0.0;
  double radius = 0.0;
};
PetersenCoordinate petersen_projection(const T4Point& x);

}  // namespace stratree
