#pragma once

// Independent reference computations used by the tests. None of these call into the library's
// geometry code; they rebuild distances from the definitions and minimize by brute force.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratree/openbook.hpp"
#include "stratree/seqio.hpp"
#include "stratree/spider.hpp"
#include "stratree/t4space.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Spider: Frechet function from the definition, minimized on a grid over every leg.

struct SpiderGridMin {
  int leg = 0;  // 0 for the center
  double u = 0.0;
  double value = 0.0;
};

inline double spider_frechet(int leg, double u, const std::vector<std::pair<int, double>>& pts,
                             const std::vector<double>& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto [l, v] = pts[i];
    // A center point (leg 0, coordinate 0) is at distance u + v = |u - v| from anything.
    const double d = l == leg ? std::abs(u - v) : u + v;
    acc += w[i] * d * d;
  }
  return acc;
}

inline SpiderGridMin spider_grid_min(int p, const std::vector<std::pair<int, double>>& pts,
                                     const std::vector<double>& w, double step) {
  double reach = 0.0;
  for (const auto& [l, v] : pts) reach = std::max(reach, v);
  SpiderGridMin best{0, 0.0, spider_frechet(0, 0.0, pts, w)};
  const long steps = static_cast<long>(std::ceil(reach / step));
  for (int leg = 1; leg <= p; ++leg) {
    for (long k = 1; k <= steps; ++k) {
      const double u = static_cast<double>(k) * step;
      const double f = spider_frechet(leg, u, pts, w);
      if (f < best.value) best = {leg, u, f};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Open book: reflection distance, coarse-to-fine 2D grid on every leaf.

struct BookGridMin {
  int leaf = 0;  // 0 when the minimizer is on the spine
  double x1 = 0.0;
  double x2 = 0.0;
  double value = 0.0;
};

struct BookPt {
  int leaf;
  double x1, x2;
};

inline double book_frechet(int leaf, double x1, double x2, const std::vector<BookPt>& pts) {
  double acc = 0.0;
  for (const auto& p : pts) {
    const double d1 = x1 - p.x1;
    const bool same = leaf == p.leaf || x2 == 0.0 || p.x2 == 0.0;
    const double d2 = same ? x2 - p.x2 : x2 + p.x2;
    acc += d1 * d1 + d2 * d2;
  }
  return acc / static_cast<double>(pts.size());
}

inline BookGridMin book_grid_min(const std::vector<BookPt>& pts, double step) {
  double r1 = 0.0, r2 = 0.0;
  for (const auto& p : pts) {
    r1 = std::max(r1, p.x1);
    r2 = std::max(r2, p.x2);
  }
  BookGridMin best{0, 0.0, 0.0, std::numeric_limits<double>::infinity()};
  // Coarse pass on a 50x50 grid per leaf, then zoom in by factors of 10 down to `step`.
  for (int leaf = 1; leaf <= 3; ++leaf) {
    double lo1 = 0.0, hi1 = r1, lo2 = 0.0, hi2 = r2;
    double h1 = std::max(hi1 / 50.0, step), h2 = std::max(hi2 / 50.0, step);
    BookGridMin local{leaf, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    while (true) {
      for (double a = lo1; a <= hi1 + 1e-15; a += h1) {
        for (double b = lo2; b <= hi2 + 1e-15; b += h2) {
          const double f = book_frechet(leaf, a, b, pts);
          if (f < local.value) local = {leaf, a, b, f};
        }
      }
      if (h1 <= step && h2 <= step) break;
      lo1 = std::max(0.0, local.x1 - 2 * h1);
      hi1 = local.x1 + 2 * h1;
      lo2 = std::max(0.0, local.x2 - 2 * h2);
      hi2 = local.x2 + 2 * h2;
      h1 = std::max(h1 / 10.0, step);
      h2 = std::max(h2 / 10.0, step);
    }
    if (local.value < best.value) best = local;
  }
  if (best.x2 == 0.0) best.leaf = 0;
  return best;
}

// ---------------------------------------------------------------------------
// T4: shortest paths through a discretization of the 10 axes. Inside a closed quadrant the
// straight segment is shortest, so any geodesic bends only on axes or at the origin; joining
// every pair of axis samples that share a quadrant and running Dijkstra gives an upper bound
// within a few grid steps of the true distance.

struct Complex {
  std::array<unsigned, 10> masks{};
  std::vector<std::pair<int, int>> quads;  // pairs of axis indices
  Complex() {
    const unsigned all[10] = {0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100, 0b0111, 0b1011, 0b1101, 0b1110};
    std::copy(all, all + 10, masks.begin());
    for (int i = 0; i < 10; ++i) {
      for (int j = i + 1; j < 10; ++j) {
        const unsigned a = masks[i], b = masks[j], both = a & b;
        if (both == 0 || both == a || both == b) quads.emplace_back(i, j);
      }
    }
  }
  int axis_of(unsigned mask) const {
    for (int i = 0; i < 10; ++i) {
      if (masks[i] == mask) return i;
    }
    return -1;
  }
};

// A point supported on at most two axes.
struct Sparse {
  int n = 0;
  std::array<int, 2> axis{};
  std::array<double, 2> len{};
  double at(int a) const {
    for (int k = 0; k < n; ++k) {
      if (axis[k] == a) return len[k];
    }
    return 0.0;
  }
};

inline Sparse sparse(const stratree::T4Point& p, const Complex& c) {
  Sparse s;
  for (const auto& [split, len] : p.coords()) {
    s.axis[s.n] = c.axis_of(split.mask());
    s.len[s.n++] = len;
  }
  return s;
}

// Euclidean distance when both points lie in one closed quadrant, else infinity.
inline double same_quadrant_distance(const Sparse& p, const Sparse& q, const Complex& c) {
  std::array<int, 4> axes{};
  int m = 0;
  for (const Sparse* s : {&p, &q}) {
    for (int k = 0; k < s->n; ++k) {
      if (std::find(axes.begin(), axes.begin() + m, s->axis[k]) == axes.begin() + m) axes[m++] = s->axis[k];
    }
  }
  if (m > 2) return std::numeric_limits<double>::infinity();
  if (m == 2) {
    const unsigned a = c.masks[axes[0]], b = c.masks[axes[1]], both = a & b;
    if (!(both == 0 || both == a || both == b)) return std::numeric_limits<double>::infinity();
  }
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    const double d = p.at(axes[k]) - q.at(axes[k]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Distance to the origin is convex along geodesics, so axis samples beyond max(|x|, |y|) are
// never needed.
inline double dijkstra_distance(const stratree::T4Point& xp, const stratree::T4Point& yp, double h) {
  static const Complex c;
  const double reach = std::max(xp.norm(), yp.norm());
  const int m = static_cast<int>(std::ceil(reach / h));
  std::vector<Sparse> nodes{sparse(xp, c), sparse(yp, c), Sparse{}};
  for (int axis = 0; axis < 10; ++axis) {
    for (int k = 1; k <= m; ++k) {
      Sparse d;
      d.n = 1;
      d.axis[0] = axis;
      d.len[0] = k * h;
      nodes.push_back(d);
    }
  }
  const std::size_t n = nodes.size();
  // Neighbors of an axis sample: samples on its own axis or a compatible one, plus x and y.
  auto axis_block = [&](int axis) { return std::pair<std::size_t, std::size_t>(3 + axis * m, 3 + (axis + 1) * m); };
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[0] = 0.0;
  heap.emplace(0.0, 0);
  auto relax = [&](std::size_t u, std::size_t v) {
    if (done[v]) return;
    const double w = same_quadrant_distance(nodes[u], nodes[v], c);
    if (dist[u] + w < dist[v]) {
      dist[v] = dist[u] + w;
      heap.emplace(dist[v], v);
    }
  };
  while (!heap.empty()) {
    const auto [du, u] = heap.top();
    heap.pop();
    if (done[u] || du > dist[u]) continue;
    if (u == 1) return du;
    done[u] = 1;
    relax(u, 0);
    relax(u, 1);
    relax(u, 2);
    for (int axis = 0; axis < 10; ++axis) {
      // Skip axes that cannot share a quadrant with any axis of u.
      bool possible = nodes[u].n == 0;
      for (int k = 0; k < nodes[u].n; ++k) {
        const unsigned a = c.masks[nodes[u].axis[k]], b = c.masks[axis], both = a & b;
        if (a == b || both == 0 || both == a || both == b) possible = true;
      }
      if (!possible) continue;
      const auto [lo, hi] = axis_block(axis);
      for (std::size_t v = lo; v < hi; ++v) relax(u, v);
    }
  }
  return dist[1];
}

// ---------------------------------------------------------------------------
// Exact multinomial tail: probability that some leg receives at least `k` of n equally likely
// draws over p legs, by dynamic programming over legs with counts capped below k.

inline double multinomial_max_tail(int n, int p, int k) {
  std::vector<double> logfact(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) logfact[i] = logfact[i - 1] + std::log(static_cast<double>(i));
  // f[m] = sum over count vectors (c_1..c_j) with sum m and each < k of prod 1/c_i!
  std::vector<double> f(n + 1, 0.0);
  f[0] = 1.0;
  for (int leg = 0; leg < p; ++leg) {
    std::vector<double> g(n + 1, 0.0);
    for (int m = 0; m <= n; ++m) {
      if (f[m] == 0.0) continue;
      for (int c = 0; c < k && m + c <= n; ++c) g[m + c] += f[m] * std::exp(-logfact[c]);
    }
    f = std::move(g);
  }
  const double all_below = f[n] * std::exp(logfact[n] - n * std::log(static_cast<double>(p)));
  return 1.0 - all_below;
}

// ---------------------------------------------------------------------------
// Random rooted binary trees with positive branch lengths.

inline stratree::PhyloTree random_binary_tree(int n, std::mt19937_64& rng, double lo = 0.1, double hi = 1.0) {
  std::uniform_real_distribution<double> len(lo, hi);
  stratree::PhyloTree t;
  // Start from a cherry and repeatedly split a random edge.
  t.root = t.add_node();
  t.add_node("t1", len(rng), t.root);
  t.add_node("t2", len(rng), t.root);
  for (int k = 3; k <= n; ++k) {
    std::vector<int> candidates;
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
      if (v != t.root) candidates.push_back(v);
    }
    const int v = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
    const int parent = t.nodes[v].parent;
    const int mid = t.add_node({}, len(rng), parent);
    auto& kids = t.nodes[parent].children;
    kids.erase(std::find(kids.begin(), kids.end(), v));
    t.nodes[v].parent = mid;
    t.nodes[mid].children.push_back(v);
    t.add_node("t" + std::to_string(k), len(rng), mid);
  }
  return t;
}

// Unrooted splits (as sorted label sets on the side not containing the first label) with the
// length of the edge that induces them. Degree-2 nodes are merged first.
inline std::map<std::set<std::string>, double> unrooted_splits(const stratree::PhyloTree& t) {
  std::vector<std::set<std::string>> below(t.nodes.size());
  std::set<std::string> all;
  std::function<void(int)> walk = [&](int v) {
    if (t.is_leaf(v)) below[v].insert(t.nodes[v].label);
    for (int c : t.nodes[v].children) {
      walk(c);
      below[v].insert(below[c].begin(), below[c].end());
    }
  };
  walk(t.root);
  all = below[t.root];
  const std::string anchor = *all.begin();
  std::map<std::set<std::string>, double> out;
  for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
    if (v == t.root) continue;
    std::set<std::string> side = below[v];
    if (side.count(anchor)) {
      std::set<std::string> other;
      std::set_difference(all.begin(), all.end(), side.begin(), side.end(), std::inserter(other, other.end()));
      side = other;
    }
    if (side.size() < 2 || side.size() + 2 > all.size()) continue;
    out[side] += t.nodes[v].length;
  }
  return out;
}

inline double tree_distance(const stratree::PhyloTree& t, const std::string& a, const std::string& b) {
  return t.path_length(*t.find_leaf(a), *t.find_leaf(b));
}

}  // namespace oracle
