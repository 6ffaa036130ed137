#pragma once

// Aligned sequences, distance matrices and rooted Newick trees.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stratree {

// Pre-aligned sequences over {A,C,G,T,U,N,-}, uppercase, all rows the same length.
struct AlignedBlock {
  std::vector<std::string> taxa;
  std::vector<std::string> rows;

  std::size_t size() const { return taxa.size(); }
  std::size_t columns() const { return rows.empty() ? 0 : rows.front().size(); }
};

enum class GapMode { Ignore, Mismatch };

struct DistanceOptions {
  GapMode gaps = GapMode::Mismatch;
  // When set, N never matches anything (including another N).
  bool strict_n = false;
};

// Symmetric, zero-diagonal, nonnegative, row-major n x n.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::vector<std::string> taxa);

  std::size_t size() const { return taxa_.size(); }
  const std::vector<std::string>& taxa() const { return taxa_; }

  double operator()(std::size_t i, std::size_t j) const { return d_[i * taxa_.size() + j]; }
  // Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double value);

  std::optional<std::size_t> index_of(std::string_view label) const;

  // Throws InvalidMatrixError when symmetry, the zero diagonal or nonnegativity fails.
  void validate(double tolerance = 0.0) const;

 private:
  std::vector<std::string> taxa_;
  std::vector<double> d_;
};

AlignedBlock parse_fasta(std::string_view text);
AlignedBlock read_fasta_file(const std::string& path);

DistanceMatrix mismatch_distance(const AlignedBlock& block, DistanceOptions options = {});

// CSV: header row of taxa, then one row of n numbers per taxon.
std::string format_distance_csv(const DistanceMatrix& d);
DistanceMatrix parse_distance_csv(std::string_view text);

// Rooted tree with per-node parent edge lengths. Node 0 is not special; `root` is explicit.
struct PhyloTree {
  struct Node {
    std::string label;
    double length = 0.0;  // length of the edge to the parent
    int parent = -1;
    std::vector<int> children;
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_node(std::string label = {}, double length = 0.0, int parent = -1);
  bool is_leaf(int id) const { return nodes[id].children.empty(); }
  std::vector<int> leaves() const;
  std::optional<int> find_leaf(std::string_view label) const;
  // Sum of edge lengths on the path between two nodes.
  double path_length(int a, int b) const;
};

PhyloTree parse_newick(std::string_view text);
// `precision` counts significant digits.
std::string serialize_newick(const PhyloTree& tree, int precision = 6);

// Equality up to child order, with branch lengths compared within `tolerance`.
bool same_tree(const PhyloTree& a, const PhyloTree& b, double tolerance);

std::string read_text_file(const std::string& path);

}  // namespace stratree
