#include "stratree/seqio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "stratree/errors.hpp"
#include "stratree/format.hpp"

namespace stratree {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool legal_residue(char c) {
  switch (c) {
    case 'A': case 'C': case 'G': case 'T': case 'U': case 'N': case '-':
      return true;
    default:
      return false;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

}  // namespace

DistanceMatrix::DistanceMatrix(std::vector<std::string> taxa)
    : taxa_(std::move(taxa)), d_(taxa_.size() * taxa_.size(), 0.0) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  d_[i * taxa_.size() + j] = value;
  d_[j * taxa_.size() + i] = value;
}

std::optional<std::size_t> DistanceMatrix::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < taxa_.size(); ++i) {
    if (taxa_[i] == label) return i;
  }
  return std::nullopt;
}

void DistanceMatrix::validate(double tolerance) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite((*this)(i, i)) || std::abs((*this)(i, i)) > tolerance) {
      throw InvalidMatrixError("nonzero diagonal entry for taxon '" + taxa_[i] + "'");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = (*this)(i, j);
      const double b = (*this)(j, i);
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidMatrixError("non-finite distance between '" + taxa_[i] + "' and '" + taxa_[j] + "'");
      }
      if (a < -tolerance || b < -tolerance) {
        throw InvalidMatrixError("negative distance between '" + taxa_[i] + "' and '" + taxa_[j] + "'");
      }
      if (std::abs(a - b) > tolerance) {
        throw InvalidMatrixError("asymmetric distance between '" + taxa_[i] + "' and '" + taxa_[j] + "'");
      }
    }
  }
}

AlignedBlock parse_fasta(std::string_view text) {
  AlignedBlock block;
  bool in_record = false;
  for (std::string_view raw : split_lines(text)) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '>') {
      // The label is the first word; anything after it is a description.
      std::string_view label = trim(line.substr(1));
      label = label.substr(0, label.find_first_of(" \t"));
      if (label.empty()) throw FastaSyntaxError("FASTA header without a label");
      block.taxa.emplace_back(label);
      block.rows.emplace_back();
      in_record = true;
      continue;
    }
    if (!in_record) throw FastaSyntaxError("sequence data before the first '>' header");
    std::string& row = block.rows.back();
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!legal_residue(up)) {
        throw AlphabetError(std::string("illegal character '") + c + "' in sequence '" + block.taxa.back() + "'");
      }
      row.push_back(up);
    }
  }
  if (block.taxa.empty()) throw FastaSyntaxError("no sequences found");

  std::unordered_set<std::string> seen;
  for (const auto& t : block.taxa) {
    if (!seen.insert(t).second) throw DuplicateTaxonError("duplicate taxon label '" + t + "'");
  }
  const std::size_t len = block.rows.front().size();
  for (std::size_t i = 0; i < block.rows.size(); ++i) {
    if (block.rows[i].empty()) throw AlignmentLengthError("empty sequence for '" + block.taxa[i] + "'");
    if (block.rows[i].size() != len) {
      throw AlignmentLengthError("sequence '" + block.taxa[i] + "' has length " +
                                 std::to_string(block.rows[i].size()) + ", expected " + std::to_string(len));
    }
  }
  return block;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AlignedBlock read_fasta_file(const std::string& path) { return parse_fasta(read_text_file(path)); }

DistanceMatrix mismatch_distance(const AlignedBlock& block, DistanceOptions options) {
  const std::size_t n = block.size();
  DistanceMatrix d(block.taxa);
  auto canon = [](char c) { return c == 'U' ? 'T' : c; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::string& a = block.rows[i];
      const std::string& b = block.rows[j];
      std::size_t compared = 0;
      std::size_t differ = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const bool gap_a = a[k] == '-';
        const bool gap_b = b[k] == '-';
        if (gap_a && gap_b) continue;
        if (gap_a || gap_b) {
          if (options.gaps == GapMode::Mismatch) {
            ++compared;
            ++differ;
          }
          continue;
        }
        ++compared;
        const char x = canon(a[k]);
        const char y = canon(b[k]);
        if (x == 'N' || y == 'N') {
          if (options.strict_n) ++differ;
        } else if (x != y) {
          ++differ;
        }
      }
      if (compared == 0) {
        throw NoComparableSitesError("no comparable columns between '" + block.taxa[i] + "' and '" +
                                     block.taxa[j] + "'");
      }
      d.set(i, j, static_cast<double>(differ) / static_cast<double>(compared));
    }
  }
  return d;
}

std::string format_distance_csv(const DistanceMatrix& d) {
  std::string out;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ',';
    out += d.taxa()[i];
  }
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += ',';
      out += format_shortest(d(i, j));
    }
    out += '\n';
  }
  return out;
}

DistanceMatrix parse_distance_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  for (std::string_view raw : split_lines(text)) {
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw CsvSyntaxError("empty distance matrix");
  const std::size_t n = rows.front().size();
  if (rows.size() != n + 1) {
    throw CsvSyntaxError("expected " + std::to_string(n) + " matrix rows, found " + std::to_string(rows.size() - 1));
  }
  std::set<std::string> seen;
  for (const auto& t : rows.front()) {
    if (t.empty()) throw CsvSyntaxError("empty taxon label in header");
    if (!seen.insert(t).second) throw DuplicateTaxonError("duplicate taxon label '" + t + "'");
  }
  DistanceMatrix d(rows.front());
  std::vector<double> raw(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cells = rows[i + 1];
    if (cells.size() != n) throw CsvSyntaxError("row " + std::to_string(i + 1) + " has the wrong number of cells");
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      const auto& cell = cells[j];
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw CsvSyntaxError("cannot parse number '" + cell + "'");
      }
      raw[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (raw[i * n + i] != 0.0) throw InvalidMatrixError("nonzero diagonal entry for taxon '" + d.taxa()[i] + "'");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (raw[i * n + j] != raw[j * n + i]) {
        throw InvalidMatrixError("asymmetric distance between '" + d.taxa()[i] + "' and '" + d.taxa()[j] + "'");
      }
      d.set(i, j, raw[i * n + j]);
    }
  }
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// PhyloTree

int PhyloTree::add_node(std::string label, double length, int parent) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back(Node{std::move(label), length, parent, {}});
  if (parent >= 0) nodes[parent].children.push_back(id);
  return id;
}

std::vector<int> PhyloTree::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].children.empty()) out.push_back(i);
  }
  return out;
}

std::optional<int> PhyloTree::find_leaf(std::string_view label) const {
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].children.empty() && nodes[i].label == label) return i;
  }
  return std::nullopt;
}

double PhyloTree::path_length(int a, int b) const {
  std::map<int, double> up;  // ancestor of a -> distance from a
  double acc = 0.0;
  for (int v = a; v >= 0; v = nodes[v].parent) {
    up[v] = acc;
    acc += nodes[v].length;
  }
  acc = 0.0;
  for (int v = b; v >= 0; v = nodes[v].parent) {
    if (auto it = up.find(v); it != up.end()) return acc + it->second;
    acc += nodes[v].length;
  }
  throw InvalidPointError("nodes are not in the same tree");
}

namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  PhyloTree parse() {
    skip();
    if (at_end()) throw NewickSyntaxError("empty Newick string");
    tree_.root = subtree(-1);
    skip();
    if (at_end() || peek() != ';') throw NewickSyntaxError(where("expected ';'"));
    ++pos_;
    skip();
    if (!at_end()) throw NewickSyntaxError(where("trailing characters after ';'"));
    std::unordered_set<std::string> seen;
    for (int leaf : tree_.leaves()) {
      const auto& label = tree_.nodes[leaf].label;
      if (label.empty()) throw NewickSyntaxError("unlabeled leaf");
      if (!seen.insert(label).second) throw DuplicateTaxonError("duplicate leaf label '" + label + "'");
    }
    return std::move(tree_);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string where(const std::string& msg) const { return msg + " at offset " + std::to_string(pos_); }

  void skip() {
    while (!at_end()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {
        const std::size_t close = text_.find(']', pos_);
        if (close == std::string_view::npos) throw NewickSyntaxError(where("unterminated comment"));
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  int subtree(int parent) {
    skip();
    const int id = tree_.add_node({}, 0.0, parent);
    if (!at_end() && peek() == '(') {
      ++pos_;
      while (true) {
        subtree(id);
        skip();
        if (at_end()) throw NewickSyntaxError(where("unbalanced parentheses"));
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        throw NewickSyntaxError(where(std::string("unexpected '") + peek() + "'"));
      }
    }
    skip();
    tree_.nodes[id].label = label();
    skip();
    if (!at_end() && peek() == ':') {
      ++pos_;
      skip();
      tree_.nodes[id].length = number();
    }
    return id;
  }

  std::string label() {
    std::string out;
    if (!at_end() && peek() == '\'') {
      ++pos_;
      while (true) {
        if (at_end()) throw NewickSyntaxError(where("unterminated quoted label"));
        char c = text_[pos_++];
        if (c == '\'') {
          if (!at_end() && peek() == '\'') {
            out.push_back('\'');
            ++pos_;
            continue;
          }
          break;
        }
        out.push_back(c);
      }
      return out;
    }
    while (!at_end()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == ':' ||
          c == ';' || c == '[' || c == ']' || c == '\'') {
        break;
      }
      out.push_back(c);
      ++pos_;
    }
    return out;
  }

  double number() {
    std::size_t end = pos_;
    while (end < text_.size()) {
      const char c = text_[end];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == 'e' ||
          c == 'E') {
        ++end;
      } else {
        break;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
    if (ec != std::errc() || ptr != text_.data() + end || end == pos_) {
      throw NewickSyntaxError(where("malformed branch length"));
    }
    if (v < 0.0) throw NegativeLengthError(where("negative branch length"));
    if (!std::isfinite(v)) throw NewickSyntaxError(where("non-finite branch length"));
    pos_ = end;
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PhyloTree tree_;
};

bool needs_quotes(const std::string& label) {
  for (char c : label) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' || c == ':' || c == ';' ||
        c == '[' || c == ']' || c == '\'') {
      return true;
    }
  }
  return false;
}

void write_label(std::string& out, const std::string& label) {
  if (!needs_quotes(label)) {
    out += label;
    return;
  }
  out += '\'';
  for (char c : label) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
}

void write_node(const PhyloTree& tree, int id, int precision, std::string& out) {
  const auto& node = tree.nodes[id];
  if (!node.children.empty()) {
    out += '(';
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      if (k) out += ',';
      write_node(tree, node.children[k], precision, out);
    }
    out += ')';
  }
  write_label(out, node.label);
  if (id != tree.root || node.length != 0.0) {
    out += ':';
    out += format_significant(node.length, precision);
  }
}

// (cluster key, length, internal label) for every non-root node.
std::vector<std::tuple<std::string, double, std::string>> clusters(const PhyloTree& t) {
  std::vector<std::tuple<std::string, double, std::string>> out;
  std::vector<std::vector<std::string>> below(t.nodes.size());
  // Post-order without recursion: process nodes in reverse BFS order.
  std::vector<int> order{t.root};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int c : t.nodes[order[k]].children) order.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (t.is_leaf(v)) {
      below[v] = {t.nodes[v].label};
    } else {
      for (int c : t.nodes[v].children) below[v].insert(below[v].end(), below[c].begin(), below[c].end());
      std::sort(below[v].begin(), below[v].end());
    }
    std::string key;
    for (const auto& s : below[v]) key += s + '\x1f';
    out.emplace_back(std::move(key) + (v == t.root ? "#root" : ""), t.nodes[v].length,
                     t.is_leaf(v) ? std::string{} : t.nodes[v].label);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PhyloTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::string serialize_newick(const PhyloTree& tree, int precision) {
  std::string out;
  write_node(tree, tree.root, precision, out);
  out += ';';
  return out;
}

bool same_tree(const PhyloTree& a, const PhyloTree& b, double tolerance) {
  const auto ca = clusters(a);
  const auto cb = clusters(b);
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (std::get<0>(ca[i]) != std::get<0>(cb[i]) || std::get<2>(ca[i]) != std::get<2>(cb[i])) return false;
    if (std::abs(std::get<1>(ca[i]) - std::get<1>(cb[i])) > tolerance) return false;
  }
  return true;
}

}  // namespace stratree
