// Command-line front end: sequences -> distances -> trees -> tree-space samples -> means.
// Exit codes: 0 success, 1 internal error, 2 bad input or configuration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "stratree/errors.hpp"
#include "stratree/json_io.hpp"
#include "stratree/mcsim.hpp"
#include "stratree/njtree.hpp"
#include "stratree/pipeline.hpp"
#include "stratree/plot.hpp"
#include "stratree/seqio.hpp"

using namespace stratree;
using json_io::Json;

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Json read_json(const std::string& path) { return json_io::parse(read_text_file(path)); }

DistanceOptions distance_options(const std::string& gaps, bool strict_n) {
  DistanceOptions o;
  o.gaps = gaps == "ignore" ? GapMode::Ignore : GapMode::Mismatch;
  o.strict_n = strict_n;
  return o;
}

Split parse_axis(const std::string& text) {
  std::vector<int> leaves;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      leaves.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ConfigError("axis must be a comma-separated list of leaves, e.g. 1,2");
    }
  }
  return Split::from_leaves(leaves);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistics of phylogenetic tree samples in the tree spaces T3 and T4."};
  app.require_subcommand(1);

  std::string output;
  std::string gaps = "mismatch";
  bool strict_n = false;
  auto add_gaps = [&](CLI::App* sub) {
    sub->add_option("--gaps", gaps, "Gap handling: 'mismatch' counts gap-vs-base columns as differences, "
                                    "'ignore' drops every gapped column")
        ->check(CLI::IsMember({"ignore", "mismatch"}));
    sub->add_flag("--strict-n", strict_n, "Treat N as a mismatch against everything");
  };

  // dist
  std::string fasta;
  auto* dist = app.add_subcommand("dist", "Pairwise mismatch-fraction distances of an aligned FASTA file (CSV)");
  dist->add_option("fasta", fasta, "Aligned FASTA file")->required();
  add_gaps(dist);
  dist->add_option("-o,--output", output, "Output file (default stdout)");

  // nj
  std::string matrix;
  int precision = 6;
  auto* nj = app.add_subcommand("nj", "Neighbor-joining tree in Newick, rooted at the final three-way join");
  auto* nj_fasta = nj->add_option("--fasta", fasta, "Aligned FASTA file");
  auto* nj_matrix = nj->add_option("--matrix", matrix, "Distance matrix CSV as written by 'dist'");
  nj_fasta->excludes(nj_matrix);
  add_gaps(nj);
  nj->add_option("--precision", precision, "Significant digits of branch lengths")->check(CLI::Range(1, 17));
  nj->add_option("-o,--output", output, "Output file (default stdout)");

  // sample-trees
  std::string groups_path;
  int reps = 10;
  std::uint64_t seed = 0;
  int k = 0;
  auto* sample = app.add_subcommand("sample-trees", "Restrict the NJ tree to one random taxon per group, repeatedly");
  sample->add_option("--fasta", fasta, "Aligned FASTA file")->required();
  sample->add_option("--groups", groups_path, "CSV of taxon,group rows; 3 groups give T3, 4 give T4")->required();
  sample->add_option("-k", k, "Expected number of groups (3 or 4)")->check(CLI::IsMember({3, 4}));
  sample->add_option("--reps", reps, "Number of repetitions")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Random seed");
  add_gaps(sample);
  sample->add_option("-o,--output", output, "Output JSON (default stdout)");

  // mean
  std::string sample_path;
  std::string space = "t3";
  double tolerance = 0.0;
  int epochs = 50;
  std::string plot_path;
  auto* mean = app.add_subcommand("mean", "Intrinsic mean, intrinsic standard deviation and stickiness of a sample");
  mean->add_option("sample", sample_path, "Sample JSON")->required();
  mean->add_option("--space", space, "Space of the sample")->check(CLI::IsMember({"t3", "t4", "openbook"}));
  mean->add_option("--tolerance", tolerance, "Boundary tolerance for verdicts")->check(CLI::NonNegativeNumber);
  mean->add_option("--epochs", epochs, "T4: passes of the inductive mean")->check(CLI::PositiveNumber);
  mean->add_option("--seed", seed, "T4: shuffle seed");
  mean->add_option("--plot", plot_path, "Also write the spider or Petersen projection SVG here");
  mean->add_option("-o,--output", output, "Output JSON (default stdout)");

  // sticky
  std::string summary_path;
  std::string axis = "1,2";
  double confidence = 0.95;
  auto* sticky = app.add_subcommand("sticky", "Stickiness verdict from tabulated leg masses and means, or from a sample");
  auto* sticky_summary = sticky->add_option("--summary", summary_path, "JSON with per-leg w and nu (optional w0)");
  auto* sticky_sample = sticky->add_option("--sample", sample_path, "Sample JSON");
  sticky_summary->excludes(sticky_sample);
  sticky->add_option("--space", space, "Space of --sample")->check(CLI::IsMember({"t3", "t4", "openbook"}));
  sticky->add_option("--axis", axis, "T4: cluster of the spine axis, e.g. 1,2");
  sticky->add_option("--tolerance", tolerance, "Boundary tolerance for verdicts")->check(CLI::NonNegativeNumber);
  sticky->add_option("--confidence", confidence, "Level of the reported interval")->check(CLI::Range(0.0, 1.0));
  sticky->add_option("-o,--output", output, "Output JSON (default stdout)");

  // simulate
  std::string law_path;
  int n = 100;
  bool coverage = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo check of the limiting law of the sample mean");
  simulate_cmd->add_option("law", law_path, "Law JSON (spider or open book)")->required();
  simulate_cmd->add_option("-n", n, "Sample size")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", seed, "Random seed");
  simulate_cmd->add_flag("--coverage", coverage, "Open book: coverage of the spine interval instead");
  simulate_cmd->add_option("--confidence", confidence, "Level for --coverage")->check(CLI::Range(0.0, 1.0));
  simulate_cmd->add_option("-o,--output", output, "Output JSON (default stdout)");

  // plot
  std::string format = "svg";
  auto* plot_cmd = app.add_subcommand("plot", "3-spider scatter or Petersen-graph projection of a sample");
  plot_cmd->add_option("sample", sample_path, "Sample JSON")->required();
  plot_cmd->add_option("--space", space, "Space of the sample")->check(CLI::IsMember({"t3", "t4"}));
  plot_cmd->add_option("--format", format, "svg, or csv for T4 projections")->check(CLI::IsMember({"svg", "csv"}));
  plot_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*dist) {
      emit(format_distance_csv(mismatch_distance(read_fasta_file(fasta), distance_options(gaps, strict_n))), output);
    } else if (*nj) {
      DistanceMatrix d;
      if (!matrix.empty()) {
        d = parse_distance_csv(read_text_file(matrix));
      } else if (!fasta.empty()) {
        d = mismatch_distance(read_fasta_file(fasta), distance_options(gaps, strict_n));
      } else {
        throw ConfigError("nj needs --fasta or --matrix");
      }
      emit(serialize_newick(neighbor_joining(d), precision) + "\n", output);
    } else if (*sample) {
      const Groups groups = parse_groups_csv(read_text_file(groups_path));
      if (k != 0 && static_cast<int>(groups.names.size()) != k) {
        throw ConfigError("-k " + std::to_string(k) + " but the groups file has " +
                          std::to_string(groups.names.size()) + " groups");
      }
      SampleTreesOptions opts;
      opts.reps = reps;
      opts.seed = seed;
      opts.distance = distance_options(gaps, strict_n);
      emit(json_io::dump(to_json(sample_trees(read_fasta_file(fasta), groups, opts))), output);
    } else if (*mean) {
      const Json j = read_json(sample_path);
      if (j.is_object() && j.contains("space") && j["space"] != space) {
        throw ConfigError("sample is for space " + j["space"].dump() + " but --space is " + space);
      }
      Json report;
      std::string svg;
      if (space == "t3") {
        const SpiderSample s = json_io::spider_sample_from_json(j);
        report = mean_report_t3(s, tolerance);
        if (!plot_path.empty()) svg = plot::spider_svg(s, intrinsic_mean(s, tolerance).mean);
      } else if (space == "t4") {
        const T4Sample s = json_io::t4_sample_from_json(j);
        T4MeanOptions opts;
        opts.epochs = epochs;
        opts.seed = seed;
        report = mean_report_t4(s, opts);
        if (!plot_path.empty()) svg = plot::petersen_svg(s, json_io::t4_point_from_json(report["mean"]));
      } else {
        if (!plot_path.empty()) throw ConfigError("--plot supports t3 and t4 samples");
        report = mean_report_openbook(json_io::openbook_sample_from_json(j), tolerance);
      }
      emit(json_io::dump(report), output);
      if (!plot_path.empty()) emit(svg, plot_path);
    } else if (*sticky) {
      Json report;
      if (!summary_path.empty()) {
        report = sticky_report(json_io::summary_from_json(read_json(summary_path)), tolerance);
      } else if (!sample_path.empty()) {
        const Json j = read_json(sample_path);
        if (space == "t3") {
          const SpiderSample s = json_io::spider_sample_from_json(j);
          report = sticky_report(summarize(s), tolerance);
          if (s.points.size() >= 2) report["interval"] = json_io::to_json(clt_interval(s, confidence));
        } else {
          const OpenBookSample s = space == "t4" ? to_open_book(json_io::t4_sample_from_json(j), parse_axis(axis))
                                                 : json_io::openbook_sample_from_json(j);
          const auto r = openbook_mean(s, tolerance);
          report = json_io::to_json(r);
          if (r.verdict != SpineVerdict::NonSticky && s.points.size() >= 2) {
            report["interval"] = json_io::to_json(spine_clt(s, confidence));
          }
        }
      } else {
        throw ConfigError("sticky needs --summary or --sample");
      }
      emit(json_io::dump(report), output);
    } else if (*simulate_cmd) {
      const Json j = read_json(law_path);
      Json report;
      if (json_io::is_openbook_law(j)) {
        const OpenBookLaw law = json_io::openbook_law_from_json(j);
        report = coverage ? json_io::to_json(spine_clt_coverage(law, n, reps, seed, confidence))
                          : json_io::to_json(simulate_openbook(law, n, reps, seed));
      } else {
        if (coverage) throw ConfigError("--coverage needs an open-book law");
        report = json_io::to_json(simulate(json_io::spider_law_from_json(j), n, reps, seed));
      }
      emit(json_io::dump(report), output);
    } else if (*plot_cmd) {
      const Json j = read_json(sample_path);
      if (space == "t3") {
        if (format != "svg") throw ConfigError("CSV output is for T4 projections");
        emit(plot::spider_svg(json_io::spider_sample_from_json(j)), output);
      } else {
        const T4Sample s = json_io::t4_sample_from_json(j);
        emit(format == "csv" ? plot::petersen_csv(s) : plot::petersen_svg(s), output);
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
