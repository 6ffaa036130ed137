#pragma once

// End-to-end steps shared by the command-line tool and the integration tests.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stratree/json_io.hpp"
#include "stratree/njtree.hpp"
#include "stratree/seqio.hpp"
#include "stratree/spider.hpp"
#include "stratree/t4space.hpp"

namespace stratree {

// Taxon groups in order of first appearance; group k supplies leaf k of every sample tree.
struct Groups {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> members;
};

// CSV rows "taxon,group"; an optional header row "taxon,group" is skipped.
Groups parse_groups_csv(std::string_view text);

struct SampleTreesOptions {
  int reps = 10;
  std::uint64_t seed = 0;
  DistanceOptions distance;
};

struct TreeSample {
  std::vector<std::string> groups;
  std::vector<std::vector<std::string>> picks;  // one taxon per group for each repetition
  std::string nj_newick;                        // tree every repetition is restricted from
  SpiderSample t3;                              // filled for three groups
  T4Sample t4;                                  // filled for four groups
  bool is_t4() const { return groups.size() == 4; }
};

// Builds one neighbor-joining tree from the whole alignment, then for each repetition picks one
// taxon per group (repetition r uses the seed mix_seed(seed, r)) and restricts the tree to them.
TreeSample sample_trees(const AlignedBlock& block, const Groups& groups, const SampleTreesOptions& options);
json_io::Json to_json(const TreeSample& s);

// Rooted Newick with letters a, b, c, d for leaves 1..4, e.g. "(((a,b):0.3,c):0.2,d)".
std::string t4_tree_type(const T4Point& x, int precision = 6);
// "((b,c),a)" style label of a 3-spider point.
std::string t3_tree_type(const SpiderPoint& x);

json_io::Json mean_report_t3(const SpiderSample& sample, double tolerance);
json_io::Json mean_report_t4(const T4Sample& sample, const T4MeanOptions& options);
json_io::Json mean_report_openbook(const OpenBookSample& sample, double tolerance);
// Per-leg table of w, nu, theta and the net moment at the center, with the verdict.
json_io::Json sticky_report(const SpiderMeasureSummary& summary, double tolerance);

}  // namespace stratree
