#include "stratree/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "stratree/errors.hpp"
#include "stratree/format.hpp"
#include "stratree/parallel.hpp"
#include "stratree/random.hpp"

namespace stratree {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Groups parse_groups_csv(std::string_view text) {
  Groups g;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ConfigError("groups line " + std::to_string(line_no) + ": expected 'taxon,group'");
    }
    const std::string taxon = trim(std::string_view(line).substr(0, comma));
    const std::string group = trim(std::string_view(line).substr(comma + 1));
    if (line_no == 1 && taxon == "taxon" && group == "group") continue;
    if (taxon.empty() || group.empty()) {
      throw ConfigError("groups line " + std::to_string(line_no) + ": empty taxon or group");
    }
    if (seen.count(taxon)) throw ConfigError("taxon '" + taxon + "' assigned to more than one group");
    seen[taxon] = group;
    auto [it, fresh] = index.emplace(group, g.names.size());
    if (fresh) {
      g.names.push_back(group);
      g.members.emplace_back();
    }
    g.members[it->second].push_back(taxon);
  }
  return g;
}

TreeSample sample_trees(const AlignedBlock& block, const Groups& groups, const SampleTreesOptions& options) {
  const std::size_t k = groups.names.size();
  if (k != 3 && k != 4) throw ConfigError("sample trees need 3 or 4 groups, got " + std::to_string(k));
  if (options.reps < 1) throw ConfigError("repetitions must be at least 1");
  for (std::size_t g = 0; g < k; ++g) {
    if (groups.members[g].empty()) throw ConfigError("group '" + groups.names[g] + "' has no members");
    for (const auto& taxon : groups.members[g]) {
      if (std::find(block.taxa.begin(), block.taxa.end(), taxon) == block.taxa.end()) {
        throw UnknownTaxonError("group member '" + taxon + "' is not in the alignment");
      }
    }
  }

  const PhyloTree tree = neighbor_joining(mismatch_distance(block, options.distance));
  TreeSample out;
  out.groups = groups.names;
  out.nj_newick = serialize_newick(tree);
  const auto reps = static_cast<std::size_t>(options.reps);
  out.picks.resize(reps);
  std::vector<SpiderPoint> t3(reps);
  std::vector<T4Point> t4(reps);
  parallel_for(reps, [&](std::size_t r) {
    Rng rng(mix_seed(options.seed, r));
    std::vector<std::string> pick;
    for (const auto& members : groups.members) pick.push_back(members[uniform_index(rng, members.size())]);
    if (k == 3) {
      t3[r] = restrict_to_triplet(tree, {pick[0], pick[1], pick[2]}).spider_point();
    } else {
      t4[r] = restrict_to_quartet(tree, {pick[0], pick[1], pick[2], pick[3]}).point;
    }
    out.picks[r] = std::move(pick);
  });
  if (k == 3) {
    out.t3.p = 3;
    out.t3.points = std::move(t3);
  } else {
    out.t4.points = std::move(t4);
  }
  return out;
}

json_io::Json to_json(const TreeSample& s) {
  using json_io::Json;
  Json j;
  j["space"] = s.is_t4() ? "t4" : "t3";
  j["groups"] = s.groups;
  j["picks"] = s.picks;
  j["nj_tree"] = s.nj_newick;
  if (s.is_t4()) {
    j["points"] = json_io::to_json(s.t4)["points"];
  } else {
    j["p"] = 3;
    j["points"] = json_io::to_json(s.t3)["points"];
  }
  return j;
}

namespace {

// Newick for a node whose leaf set is `mask`, given the interior clusters of the tree.
std::string render(unsigned mask, const std::vector<T4Point::Coord>& clusters, int precision) {
  // Subtrees before bare leaves, each group by lowest leaf: "((b,c),a)".
  std::vector<std::tuple<bool, unsigned, std::string>> parts;
  unsigned covered = 0;
  for (const auto& [split, len] : clusters) {
    const unsigned m = split.mask();
    if (m == mask || (m & mask) != m) continue;
    const bool maximal = std::none_of(clusters.begin(), clusters.end(), [&](const T4Point::Coord& c) {
      const unsigned o = c.first.mask();
      return o != m && o != mask && (o & mask) == o && (o & m) == m;
    });
    if (!maximal) continue;
    covered |= m;
    parts.emplace_back(false, m & (~m + 1), render(m, clusters, precision) + ":" + format_significant(len, precision));
  }
  for (int leaf = 0; leaf < 4; ++leaf) {
    const unsigned bit = 1u << leaf;
    if ((mask & bit) && !(covered & bit)) parts.emplace_back(true, bit, std::string(1, static_cast<char>('a' + leaf)));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + std::get<2>(parts[i]);
  return out + ")";
}

}  // namespace

std::string t4_tree_type(const T4Point& x, int precision) { return render(0b1111, x.coords(), precision); }

std::string t3_tree_type(const SpiderPoint& x) {
  switch (x.leg()) {
    case 1: return "((b,c),a)";
    case 2: return "((a,c),b)";
    case 3: return "((a,b),c)";
    default: return "(a,b,c)";
  }
}

json_io::Json mean_report_t3(const SpiderSample& sample, double tolerance) {
  using json_io::Json;
  const StickinessReport r = intrinsic_mean(sample, tolerance);
  const SpiderMeasureSummary s = summarize(sample);
  Json j;
  j["space"] = "t3";
  j["n"] = sample.points.size();
  j["tree_type"] = t3_tree_type(r.mean);
  j["intrinsic_mean"] = r.mean.u();
  j["intrinsic_sd"] = *r.intrinsic_sd;
  j["mean"] = json_io::to_json(r.mean);
  j["w"] = s.w;
  j["nu"] = s.nu;
  j["theta"] = r.theta;
  j["verdict"] = to_string(r.verdict);
  j["leg"] = r.leg;
  return j;
}

json_io::Json mean_report_t4(const T4Sample& sample, const T4MeanOptions& options) {
  using json_io::Json;
  const T4MeanResult r = t4_mean(sample, options);
  Json j;
  j["space"] = "t4";
  j["n"] = sample.points.size();
  j["tree_type"] = t4_tree_type(r.mean);
  j["mean"] = json_io::to_json(r.mean);
  j["stratum"] = to_string(stratum_of(r.mean));
  j["intrinsic_sd"] = std::sqrt(r.diagnostics.frechet_value);
  if (!r.mean.is_origin()) {
    j["projection"] = json_io::to_json(petersen_projection(r.mean));
  } else {
    j["projection"] = nullptr;
  }
  j["diagnostics"] = json_io::to_json(r.diagnostics);
  return j;
}

json_io::Json mean_report_openbook(const OpenBookSample& sample, double tolerance) {
  json_io::Json j;
  j["space"] = "openbook";
  j["n"] = sample.points.size();
  for (auto& [key, value] : json_io::to_json(openbook_mean(sample, tolerance)).items()) j[key] = value;
  return j;
}

json_io::Json sticky_report(const SpiderMeasureSummary& summary, double tolerance) {
  using json_io::Json;
  const StickinessReport r = intrinsic_mean(summary, tolerance);
  Json legs = Json::array();
  for (int a = 1; a <= summary.legs(); ++a) {
    Json row;
    row["leg"] = a;
    row["w"] = summary.w[a - 1];
    row["nu"] = summary.nu[a - 1];
    row["theta"] = r.theta[a - 1];
    row["net_moment"] = -r.theta[a - 1];
    legs.push_back(row);
  }
  Json j;
  j["legs"] = legs;
  j["verdict"] = to_string(r.verdict);
  j["leg"] = r.leg;
  j["mean"] = json_io::to_json(r.mean);
  return j;
}

}  // namespace stratree
