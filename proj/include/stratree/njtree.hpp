#pragma once

// Neighbor joining and restriction of trees to three or four taxa.

#include <array>
#include <string>
#include <vector>

#include "stratree/seqio.hpp"
#include "stratree/spider.hpp"
#include "stratree/t4space.hpp"

namespace stratree {

// Saitou-Nei neighbor joining. The result is rooted at the node created by the final three-way
// join. Negative branch estimates are set to zero and the pair's distance goes to the sibling.
PhyloTree neighbor_joining(const DistanceMatrix& d);

enum class TripletTopology { Star, AB_C, AC_B, BC_A };
std::string to_string(TripletTopology t);

struct Triplet {
  std::array<std::string, 3> labels;
  TripletTopology topology = TripletTopology::Star;
  double interior_length = 0.0;

  // Leg k of the 3-spider holds the trees whose outgroup is label k.
  SpiderPoint spider_point() const;
  // Newick letters with a, b, c standing for the three labels, e.g. "((b,c),a)".
  std::string tree_type() const;
};

struct Quartet {
  std::array<std::string, 4> labels;  // leaf k of the T4 clusters is labels[k-1]
  T4Point point;
};

// The subtree spanned by `labels` and the root, with single-child nodes other than the root
// merged into their child. Branch lengths are summed, so path lengths are preserved.
PhyloTree induced_subtree(const PhyloTree& tree, const std::vector<std::string>& labels);

Triplet restrict_to_triplet(const PhyloTree& tree, const std::array<std::string, 3>& labels);
Quartet restrict_to_quartet(const PhyloTree& tree, const std::array<std::string, 4>& labels);

}  // namespace stratree
