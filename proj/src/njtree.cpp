#include "stratree/njtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stratree/errors.hpp"

namespace stratree {

PhyloTree neighbor_joining(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n < 3) throw TooFewTaxaError("neighbor joining needs at least 3 taxa, got " + std::to_string(n));
  d.validate(1e-12);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(d(i, j))) throw InvalidMatrixError("distance matrix has non-finite entries");
    }
  }

  PhyloTree tree;
  std::vector<int> node(n);  // tree node held by each active slot
  for (std::size_t i = 0; i < n; ++i) node[i] = tree.add_node(d.taxa()[i]);
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i][j] = d(i, j);
  }
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  auto attach = [&](int parent, int child, double length) {
    tree.nodes[child].parent = parent;
    tree.nodes[child].length = length;
    tree.nodes[parent].children.push_back(child);
  };

  while (active.size() > 3) {
    const std::size_t r = active.size();
    std::vector<double> sums(r, 0.0);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = 0; b < r; ++b) sums[a] += dist[active[a]][active[b]];
    }
    std::size_t bi = 0, bj = 1;
    double best_q = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = a + 1; b < r; ++b) {
        const double q = static_cast<double>(r - 2) * dist[active[a]][active[b]] - sums[a] - sums[b];
        if (q < best_q) {
          best_q = q;
          bi = a;
          bj = b;
        }
      }
    }
    const std::size_t i = active[bi], j = active[bj];
    const double dij = dist[i][j];
    double li = dij / 2.0 + (sums[bi] - sums[bj]) / (2.0 * static_cast<double>(r - 2));
    double lj = dij - li;
    if (li < 0.0) {
      li = 0.0;
      lj = dij;
    } else if (lj < 0.0) {
      lj = 0.0;
      li = dij;
    }
    const int u = tree.add_node();
    attach(u, node[i], li);
    attach(u, node[j], lj);
    for (std::size_t k : active) {
      if (k == i || k == j) continue;
      const double duk = (dist[i][k] + dist[j][k] - dij) / 2.0;
      dist[i][k] = dist[k][i] = duk;
    }
    dist[i][i] = 0.0;
    node[i] = u;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  const std::size_t i = active[0], j = active[1], k = active[2];
  const int root = tree.add_node();
  attach(root, node[i], std::max(0.0, (dist[i][j] + dist[i][k] - dist[j][k]) / 2.0));
  attach(root, node[j], std::max(0.0, (dist[i][j] + dist[j][k] - dist[i][k]) / 2.0));
  attach(root, node[k], std::max(0.0, (dist[i][k] + dist[j][k] - dist[i][j]) / 2.0));
  tree.root = root;
  return tree;
}

std::string to_string(TripletTopology t) {
  switch (t) {
    case TripletTopology::Star: return "star";
    case TripletTopology::AB_C: return "ab|c";
    case TripletTopology::AC_B: return "ac|b";
    case TripletTopology::BC_A: return "bc|a";
  }
  return "?";
}

SpiderPoint Triplet::spider_point() const {
  switch (topology) {
    case TripletTopology::BC_A: return SpiderPoint::on_leg(1, interior_length);
    case TripletTopology::AC_B: return SpiderPoint::on_leg(2, interior_length);
    case TripletTopology::AB_C: return SpiderPoint::on_leg(3, interior_length);
    case TripletTopology::Star: break;
  }
  return SpiderPoint::center();
}

std::string Triplet::tree_type() const {
  switch (topology) {
    case TripletTopology::BC_A: return "((b,c),a)";
    case TripletTopology::AC_B: return "((a,c),b)";
    case TripletTopology::AB_C: return "((a,b),c)";
    case TripletTopology::Star: break;
  }
  return "(a,b,c)";
}

namespace {

std::vector<int> leaf_ids(const PhyloTree& tree, const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (const auto& label : labels) {
    const auto id = tree.find_leaf(label);
    if (!id) throw UnknownTaxonError("'" + label + "' is not a leaf of the tree");
    if (std::find(out.begin(), out.end(), *id) != out.end()) throw InputError("label '" + label + "' given twice");
    out.push_back(*id);
  }
  return out;
}

// Leaf-label sets below each interior edge of an induced subtree, with their lengths. Edges
// above every chosen leaf (the root's pendant) and pendant leaf edges are not interior.
std::vector<std::pair<std::vector<std::string>, double>> interior_clusters(const PhyloTree& sub,
                                                                           std::size_t leaf_count) {
  std::vector<std::vector<std::string>> below(sub.nodes.size());
  std::vector<std::pair<std::vector<std::string>, double>> out;
  // Children are created after parents, so a reverse sweep visits children first.
  for (int v = static_cast<int>(sub.nodes.size()) - 1; v >= 0; --v) {
    if (sub.is_leaf(v)) below[v].push_back(sub.nodes[v].label);
    for (int c : sub.nodes[v].children) below[v].insert(below[v].end(), below[c].begin(), below[c].end());
    if (v == sub.root || sub.is_leaf(v)) continue;
    if (below[v].size() >= 2 && below[v].size() < leaf_count) out.emplace_back(below[v], sub.nodes[v].length);
  }
  return out;
}

}  // namespace

PhyloTree induced_subtree(const PhyloTree& tree, const std::vector<std::string>& labels) {
  if (tree.root < 0) throw InputError("tree has no root");
  const auto ids = leaf_ids(tree, labels);
  std::vector<char> kept(tree.nodes.size(), 0);
  for (int leaf : ids) {
    for (int v = leaf; v >= 0 && !kept[v]; v = tree.nodes[v].parent) kept[v] = 1;
  }

  PhyloTree sub;
  auto emit = [&](auto&& self, int v, double length, int parent) -> void {
    std::vector<int> kids;
    for (int c : tree.nodes[v].children) {
      if (kept[c]) kids.push_back(c);
    }
    if (v != tree.root && kids.size() == 1) {
      self(self, kids[0], length + tree.nodes[kids[0]].length, parent);
      return;
    }
    const int id = sub.add_node(tree.nodes[v].label, length, parent);
    for (int c : kids) self(self, c, tree.nodes[c].length, id);
  };
  emit(emit, tree.root, 0.0, -1);
  sub.root = 0;
  return sub;
}

Triplet restrict_to_triplet(const PhyloTree& tree, const std::array<std::string, 3>& labels) {
  const PhyloTree sub = induced_subtree(tree, {labels.begin(), labels.end()});
  Triplet t;
  t.labels = labels;
  for (const auto& [cluster, length] : interior_clusters(sub, 3)) {
    if (length <= 0.0) continue;
    auto has = [&](int k) { return std::find(cluster.begin(), cluster.end(), labels[k]) != cluster.end(); };
    t.interior_length = length;
    t.topology = !has(0) ? TripletTopology::BC_A : !has(1) ? TripletTopology::AC_B : TripletTopology::AB_C;
  }
  return t;
}

Quartet restrict_to_quartet(const PhyloTree& tree, const std::array<std::string, 4>& labels) {
  const PhyloTree sub = induced_subtree(tree, {labels.begin(), labels.end()});
  std::vector<T4Point::Coord> coords;
  for (const auto& [cluster, length] : interior_clusters(sub, 4)) {
    std::vector<int> leaves;
    for (const auto& label : cluster) {
      leaves.push_back(static_cast<int>(std::find(labels.begin(), labels.end(), label) - labels.begin()) + 1);
    }
    coords.emplace_back(Split::from_leaves(leaves), length);
  }
  return Quartet{labels, T4Point::make(std::move(coords))};
}

}  // namespace stratree
