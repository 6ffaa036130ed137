#include "stratree/t4space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "stratree/errors.hpp"
#include "stratree/random.hpp"

namespace stratree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRight = kPi / 2.0;

constexpr std::array<unsigned, Split::kCount> kMasks = {0b0011, 0b0101, 0b1001, 0b0110, 0b1010,
                                                        0b1100, 0b0111, 0b1011, 0b1101, 0b1110};

bool masks_compatible(unsigned a, unsigned b) {
  const unsigned both = a & b;
  return a != b && (both == 0 || both == a || both == b);
}

// Static combinatorics of the 10 axes and 15 quadrants.
struct Complex {
  std::array<Quadrant, 15> quads{};
  std::array<std::array<int, Split::kCount>, Split::kCount> quad_of{};  // -1 when incompatible
  std::array<std::array<int, Split::kCount>, Split::kCount> hops{};     // Petersen graph distance
  std::array<std::array<int, Split::kCount>, Split::kCount> via{};      // common neighbor at distance 2

  Complex() {
    for (auto& row : quad_of) row.fill(-1);
    int q = 0;
    for (int i = 0; i < Split::kCount; ++i) {
      for (int j = i + 1; j < Split::kCount; ++j) {
        if (masks_compatible(kMasks[i], kMasks[j])) {
          quads[q] = Quadrant{Split::from_index(i), Split::from_index(j)};
          quad_of[i][j] = quad_of[j][i] = q;
          ++q;
        }
      }
    }
    for (int i = 0; i < Split::kCount; ++i) {
      for (int j = 0; j < Split::kCount; ++j) {
        via[i][j] = -1;
        if (i == j) {
          hops[i][j] = 0;
        } else if (quad_of[i][j] >= 0) {
          hops[i][j] = 1;
        } else {
          hops[i][j] = 2;
          for (int k = 0; k < Split::kCount; ++k) {
            if (quad_of[i][k] >= 0 && quad_of[k][j] >= 0) via[i][j] = k;
          }
        }
      }
    }
  }
};

const Complex& complex() {
  static const Complex c;
  return c;
}

// Direction of a nonzero point in the link (the Petersen graph with pi/2 edges).
struct LinkPos {
  int vertex = -1;  // set when the point lies on an axis
  int quad = -1;    // set when the point lies inside a quadrant
  double phi = 0.0; // angle from the quadrant's first axis
};

LinkPos link_pos(const T4Point& x) {
  const auto& c = x.coords();
  if (c.size() == 1) return LinkPos{c[0].first.index(), -1, 0.0};
  return LinkPos{-1, complex().quad_of[c[0].first.index()][c[1].first.index()], std::atan2(c[1].second, c[0].second)};
}

// Angle of an axis inside a quadrant's local frame.
double axis_angle(int quad, int vertex) {
  return complex().quads[quad].first.index() == vertex ? 0.0 : kRight;
}

struct Step {
  int quad;
  double from;  // local angles
  double to;
};

struct Route {
  double theta = std::numeric_limits<double>::infinity();
  bool direct = false;  // both points share a closed quadrant
  int direct_quad = -1;
  std::vector<Step> steps;
};

// Closed quadrants containing the point, with its angle in each.
std::vector<std::pair<int, double>> closed_quads(const LinkPos& p) {
  std::vector<std::pair<int, double>> out;
  if (p.quad >= 0) {
    out.emplace_back(p.quad, p.phi);
    return out;
  }
  for (int q = 0; q < 15; ++q) {
    const auto& quad = complex().quads[q];
    if (quad.first.index() == p.vertex || quad.second.index() == p.vertex) {
      out.emplace_back(q, axis_angle(q, p.vertex));
    }
  }
  return out;
}

struct Exit {
  int vertex;
  double angle;
  std::optional<Step> step;  // arc from the point to the vertex, if any
};

std::vector<Exit> exits(const LinkPos& p) {
  if (p.vertex >= 0) return {Exit{p.vertex, 0.0, std::nullopt}};
  const auto& quad = complex().quads[p.quad];
  return {Exit{quad.first.index(), p.phi, Step{p.quad, p.phi, 0.0}},
          Exit{quad.second.index(), kRight - p.phi, Step{p.quad, p.phi, kRight}}};
}

// Shortest route in the link between two nonzero points. Routes cross at most two axes: any
// longer unfolding spans at least pi and loses to the cone path.
Route shortest_route(const LinkPos& x, const LinkPos& y) {
  Route best;
  for (const auto& [qx, ax] : closed_quads(x)) {
    for (const auto& [qy, ay] : closed_quads(y)) {
      if (qx != qy) continue;
      const double theta = std::abs(ax - ay);
      if (theta < best.theta) {
        best = Route{theta, true, qx, {Step{qx, ax, ay}}};
      }
    }
  }
  const auto& cx = complex();
  for (const auto& out : exits(x)) {
    for (const auto& in : exits(y)) {
      const int h = cx.hops[out.vertex][in.vertex];
      const double theta = out.angle + h * kRight + in.angle;
      if (!(theta < best.theta)) continue;
      Route r;
      r.theta = theta;
      if (out.step) r.steps.push_back(*out.step);
      std::vector<int> chain{out.vertex};
      if (h == 2) chain.push_back(cx.via[out.vertex][in.vertex]);
      if (h >= 1) chain.push_back(in.vertex);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        const int q = cx.quad_of[chain[k]][chain[k + 1]];
        r.steps.push_back(Step{q, axis_angle(q, chain[k]), axis_angle(q, chain[k + 1])});
      }
      if (in.step) r.steps.push_back(Step{in.step->quad, in.step->to, in.step->from});
      best = std::move(r);
    }
  }
  return best;
}

// Coordinates of a point in a closed quadrant containing it.
std::pair<double, double> local_coords(const T4Point& x, int quad) {
  const auto& q = complex().quads[quad];
  return {x.length(q.first), x.length(q.second)};
}

T4Point from_local(int quad, double a, double b) {
  const auto& q = complex().quads[quad];
  return T4Point::make({{q.first, a}, {q.second, b}});
}

T4Point scaled(const T4Point& x, double factor) {
  if (factor <= 0.0) return T4Point{};
  std::vector<T4Point::Coord> c = x.coords();
  for (auto& [s, len] : c) len *= factor;
  return T4Point::make(std::move(c));
}

// Link distance from an axis to a nonzero point.
double vertex_to(int vertex, const LinkPos& y) {
  const auto& cx = complex();
  if (y.vertex >= 0) return cx.hops[vertex][y.vertex] * kRight;
  const auto& q = cx.quads[y.quad];
  return std::min(cx.hops[vertex][q.first.index()] * kRight + y.phi,
                  cx.hops[vertex][q.second.index()] * kRight + kRight - y.phi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Split

Split Split::from_mask(unsigned mask) {
  for (unsigned m : kMasks) {
    if (m == mask) return Split(mask);
  }
  throw InvalidPointError("cluster must contain 2 or 3 of the leaves 1..4");
}

Split Split::from_leaves(const std::vector<int>& leaves) {
  unsigned mask = 0;
  for (int leaf : leaves) {
    if (leaf < 1 || leaf > 4) throw InvalidPointError("cluster leaves must be in 1..4");
    const unsigned bit = 1u << (leaf - 1);
    if (mask & bit) throw InvalidPointError("repeated leaf in cluster");
    mask |= bit;
  }
  return from_mask(mask);
}

Split Split::from_index(int index) {
  if (index < 0 || index >= kCount) throw InvalidPointError("split index out of range");
  return Split(kMasks[index]);
}

const std::array<Split, Split::kCount>& Split::all() {
  static const std::array<Split, kCount> splits = [] {
    std::array<Split, kCount> out{};
    for (int i = 0; i < kCount; ++i) out[i] = Split(kMasks[i]);
    return out;
  }();
  return splits;
}

int Split::index() const {
  for (int i = 0; i < kCount; ++i) {
    if (kMasks[i] == mask_) return i;
  }
  return -1;
}

std::vector<int> Split::leaves() const {
  std::vector<int> out;
  for (int k = 1; k <= 4; ++k) {
    if (mask_ & (1u << (k - 1))) out.push_back(k);
  }
  return out;
}

bool Split::compatible_with(const Split& other) const { return masks_compatible(mask_, other.mask_); }

std::string Split::name() const {
  std::string out = "{";
  for (int leaf : leaves()) {
    if (out.size() > 1) out += ',';
    out += std::to_string(leaf);
  }
  return out + "}";
}

std::vector<Quadrant> enumerate_quadrants() {
  const auto& q = complex().quads;
  return {q.begin(), q.end()};
}

// ---------------------------------------------------------------------------
// T4Point

T4Point T4Point::make(std::vector<Coord> coords) {
  std::vector<Coord> kept;
  for (const auto& [split, len] : coords) {
    if (!std::isfinite(len) || len < 0.0) throw InvalidPointError("split lengths must be finite and nonnegative");
    for (const auto& [other, unused] : kept) {
      if (other == split) throw InvalidPointError("split " + split.name() + " listed twice");
    }
    if (len > 0.0) kept.emplace_back(split, len);
  }
  if (kept.size() > 2) throw InvalidPointError("a four-leaf tree has at most two interior edges");
  std::sort(kept.begin(), kept.end(), [](const Coord& a, const Coord& b) { return a.first < b.first; });
  if (kept.size() == 2 && !kept[0].first.compatible_with(kept[1].first)) {
    throw InvalidPointError("splits " + kept[0].first.name() + " and " + kept[1].first.name() + " are incompatible");
  }
  T4Point p;
  p.coords_ = std::move(kept);
  return p;
}

double T4Point::length(const Split& s) const {
  for (const auto& [split, len] : coords_) {
    if (split == s) return len;
  }
  return 0.0;
}

double T4Point::norm() const {
  if (coords_.empty()) return 0.0;
  if (coords_.size() == 1) return coords_[0].second;
  return std::hypot(coords_[0].second, coords_[1].second);
}

std::string to_string(Stratum s) {
  switch (s) {
    case Stratum::Origin: return "Origin";
    case Stratum::OneD: return "OneD";
    case Stratum::Top2D: return "Top2D";
  }
  return "?";
}

Stratum stratum_of(const T4Point& x) {
  switch (x.dimension()) {
    case 0: return Stratum::Origin;
    case 1: return Stratum::OneD;
    default: return Stratum::Top2D;
  }
}

// ---------------------------------------------------------------------------
// Geodesics

double t4_distance(const T4Point& x, const T4Point& y) {
  if (x.is_origin()) return y.norm();
  if (y.is_origin()) return x.norm();
  const Route route = shortest_route(link_pos(x), link_pos(y));
  if (route.direct) {
    const auto [xa, xb] = local_coords(x, route.direct_quad);
    const auto [ya, yb] = local_coords(y, route.direct_quad);
    return std::hypot(xa - ya, xb - yb);
  }
  const double r1 = x.norm();
  const double r2 = y.norm();
  if (route.theta >= kPi) return r1 + r2;
  return std::hypot(r1 - r2 * std::cos(route.theta), r2 * std::sin(route.theta));
}

T4Point geodesic_point(const T4Point& x, const T4Point& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("geodesic parameter must lie in [0, 1]");
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  if (x.is_origin()) return scaled(y, t);
  if (y.is_origin()) return scaled(x, 1.0 - t);

  const Route route = shortest_route(link_pos(x), link_pos(y));
  if (route.direct) {
    const auto [xa, xb] = local_coords(x, route.direct_quad);
    const auto [ya, yb] = local_coords(y, route.direct_quad);
    return from_local(route.direct_quad, (1.0 - t) * xa + t * ya, (1.0 - t) * xb + t * yb);
  }
  const double r1 = x.norm();
  const double r2 = y.norm();
  if (route.theta >= kPi) {
    const double s = t * (r1 + r2);
    return s < r1 ? scaled(x, 1.0 - s / r1) : scaled(y, (s - r1) / r2);
  }

  // Unfold the route into a plane with x on the positive horizontal axis.
  const double px = (1.0 - t) * r1 + t * r2 * std::cos(route.theta);
  const double py = t * r2 * std::sin(route.theta);
  const double rho = std::hypot(px, py);
  double omega = std::atan2(py, px);
  double travelled = 0.0;
  for (std::size_t k = 0; k < route.steps.size(); ++k) {
    const Step& st = route.steps[k];
    const double span = std::abs(st.to - st.from);
    const bool last = k + 1 == route.steps.size();
    if (omega <= travelled + span || last) {
      const double along = std::clamp(omega - travelled, 0.0, span);
      double alpha = st.from + (st.to >= st.from ? along : -along);
      if (alpha < 1e-12) alpha = 0.0;
      if (alpha > kRight - 1e-12) alpha = kRight;
      const double a = alpha == kRight ? 0.0 : rho * std::cos(alpha);
      const double b = alpha == 0.0 ? 0.0 : rho * std::sin(alpha);
      return from_local(st.quad, a, b);
    }
    travelled += span;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Frechet mean

void T4Sample::validate() const {
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

std::vector<double> T4Sample::normalized_weights() const {
  const std::size_t n = points.size();
  if (weights.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> out(weights);
  for (double& w : out) w /= total;
  return out;
}

double t4_frechet(const T4Point& x, const T4Sample& sample) {
  sample.validate();
  if (sample.points.empty()) throw EmptySampleError("empty T4 sample");
  const auto w = sample.normalized_weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const double d = t4_distance(x, sample.points[i]);
    acc += w[i] * d * d;
  }
  return acc;
}

namespace {

// The Frechet function restricted to one closed quadrant, in its local (a, b) coordinates.
class QuadrantObjective {
 public:
  QuadrantObjective(int quad, const T4Sample& sample, const std::vector<double>& weights) : quad_(quad) {
    const auto& q = complex().quads[quad];
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
      const T4Point& y = sample.points[i];
      Term t;
      t.w = weights[i];
      t.r = y.norm();
      t.inside = std::all_of(y.coords().begin(), y.coords().end(),
                             [&](const T4Point::Coord& c) { return q.contains(c.first); });
      if (t.inside) {
        std::tie(t.a, t.b) = local_coords(y, quad);
      } else {
        const LinkPos lp = link_pos(y);
        t.to_first = vertex_to(q.first.index(), lp);
        t.to_second = vertex_to(q.second.index(), lp);
      }
      terms_.push_back(t);
    }
  }

  double operator()(double a, double b) const {
    const double r = std::hypot(a, b);
    const double phi = r > 0.0 ? std::atan2(b, a) : 0.0;
    double acc = 0.0;
    for (const Term& t : terms_) {
      double d2;
      if (t.inside) {
        d2 = (a - t.a) * (a - t.a) + (b - t.b) * (b - t.b);
      } else if (r == 0.0) {
        d2 = t.r * t.r;
      } else {
        const double theta = std::min(phi + t.to_first, kRight - phi + t.to_second);
        if (theta >= kPi) {
          d2 = (r + t.r) * (r + t.r);
        } else {
          const double u = r - t.r * std::cos(theta);
          const double v = t.r * std::sin(theta);
          d2 = u * u + v * v;
        }
      }
      acc += t.w * d2;
    }
    return acc;
  }

  int quad() const { return quad_; }

 private:
  struct Term {
    double w = 0.0;
    double r = 0.0;
    bool inside = false;
    double a = 0.0, b = 0.0;
    double to_first = 0.0, to_second = 0.0;
  };
  int quad_;
  std::vector<Term> terms_;
};

// Golden-section search for a convex function on [0, hi]; the left endpoint is checked too.
template <typename F>
std::pair<double, double> golden_min(F&& f, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  double x = (lo + hi) / 2.0;
  double fx = f(x);
  const double f0 = f(0.0);
  if (f0 <= fx) {
    x = 0.0;
    fx = f0;
  }
  return {x, fx};
}

}  // namespace

T4MeanResult t4_mean(const T4Sample& sample, const T4MeanOptions& options) {
  sample.validate();
  if (sample.points.empty()) throw EmptySampleError("empty T4 sample");
  if (options.epochs < 1) throw InputError("epochs must be at least 1");
  const auto weights = sample.normalized_weights();
  const std::size_t n = sample.points.size();

  // Inductive mean: each visited point pulls the estimate along the geodesic by its share of
  // the accumulated weight.
  Rng rng(options.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  T4Point m;
  double seen = 0.0;
  T4MeanDiagnostics diag;
  diag.last_epoch_movement = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle(order, rng);
    const T4Point start = m;
    for (std::size_t k : order) {
      if (weights[k] <= 0.0) continue;
      seen += weights[k];
      m = seen == weights[k] ? sample.points[k] : geodesic_point(m, sample.points[k], weights[k] / seen);
    }
    diag.epochs_run = epoch + 1;
    if (epoch > 0) {
      diag.last_epoch_movement = t4_distance(start, m);
      if (diag.last_epoch_movement < options.tolerance) {
        diag.converged = true;
        break;
      }
    }
  }

  T4MeanResult result{m, diag};
  double best_value = t4_frechet(m, sample);

  double radius = 0.0;
  for (const auto& y : sample.points) radius = std::max(radius, y.norm());
  if (radius > 0.0) {
    const double tol = 1e-10 * radius;
    double refined_value = std::numeric_limits<double>::infinity();
    T4Point refined;
    for (int q = 0; q < 15; ++q) {
      const QuadrantObjective objective(q, sample, weights);
      double best_b = 0.0;
      auto profile = [&](double a) {
        const auto [b, fb] = golden_min([&](double bb) { return objective(a, bb); }, radius, tol);
        best_b = b;
        return fb;
      };
      const auto [a, fa] = golden_min(profile, radius, tol);
      profile(a);
      if (fa < refined_value) {
        refined_value = fa;
        refined = from_local(q, a, best_b);
      }
    }
    refined_value = t4_frechet(refined, sample);
    if (refined_value < best_value - 1e-12 * (1.0 + best_value)) {
      result.diagnostics.refinement_shift = t4_distance(m, refined);
      result.mean = refined;
      best_value = refined_value;
    }
  }
  result.diagnostics.frechet_value = best_value;
  return result;
}

// ---------------------------------------------------------------------------
// Open-book neighborhoods and projection

OpenBookSample to_open_book(const T4Sample& sample, const Split& axis) {
  std::vector<Split> pages;
  for (const auto& q : complex().quads) {
    if (q.first == axis) pages.push_back(q.second);
    if (q.second == axis) pages.push_back(q.first);
  }
  std::sort(pages.begin(), pages.end());
  auto page_of = [&](const Split& s) {
    for (int k = 0; k < 3; ++k) {
      if (pages[k] == s) return k + 1;
    }
    return 0;
  };

  OpenBookSample book;
  book.weights = sample.weights;
  for (const auto& x : sample.points) {
    double spine = 0.0;
    double off = 0.0;
    int leaf = 0;
    for (const auto& [split, len] : x.coords()) {
      if (split == axis) {
        spine = len;
      } else if (int k = page_of(split); k > 0) {
        leaf = k;
        off = len;
      } else {
        throw NotInBookError("split " + split.name() + " is not adjacent to axis " + axis.name());
      }
    }
    book.points.push_back(OpenBookPoint::on_leaf(leaf == 0 ? 1 : leaf, spine, off));
  }
  return book;
}

SpineStickinessReport spine_stickiness_t4(const T4Sample& sample, const Split& axis, double tolerance) {
  return openbook_mean(to_open_book(sample, axis), tolerance);
}

PetersenCoordinate petersen_projection(const T4Point& x) {
  if (x.is_origin()) throw UndefinedProjectionError("the star tree has no direction");
  const auto& c = x.coords();
  PetersenCoordinate out;
  out.from = c[0].first;
  out.radius = x.norm();
  if (c.size() == 2) {
    out.to = c[1].first;
    out.s = std::atan2(c[1].second, c[0].second) / kRight;
  }
  return out;
}

}  // namespace stratree
