#include "stratree/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stratree/format.hpp"

namespace stratree::plot {

namespace {

constexpr double kSize = 400.0;
constexpr double kMid = kSize / 2.0;

std::string num(double v) { return format_significant(v, 6); }

std::string svg_open(const std::string& comment) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<!-- stratree plot -->\n"
      << "<!--\n" << comment << "-->\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

struct Xy {
  double x, y;
};

void line(std::ostringstream& out, Xy a, Xy b, const char* stroke) {
  out << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y)
      << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
}

void dot(std::ostringstream& out, Xy p, double r, const char* fill, const std::string& title) {
  out << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(r) << "\" fill=\"" << fill
      << "\"><title>" << title << "</title></circle>\n";
}

void text(std::ostringstream& out, Xy p, const std::string& s) {
  out << "<text x=\"" << num(p.x) << "\" y=\"" << num(p.y)
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << s << "</text>\n";
}

}  // namespace

std::string spider_svg(const SpiderSample& sample, const std::optional<SpiderPoint>& mean) {
  double reach = 0.0;
  for (const auto& x : sample.points) reach = std::max(reach, x.u());
  if (mean) reach = std::max(reach, mean->u());
  if (reach <= 0.0) reach = 1.0;
  const double scale = (kMid - 40.0) / reach;
  auto at = [&](int leg, double u) {
    const double angle = std::numbers::pi / 2.0 - 2.0 * std::numbers::pi * (leg - 1) / sample.p;
    return Xy{kMid + scale * u * std::cos(angle), kMid - scale * u * std::sin(angle)};
  };

  std::ostringstream out;
  out << svg_open("  p-spider; leg k is a ray from the center, leg 1 up, then clockwise.\n"
                  "  Grey dots are sample points, the red dot is the intrinsic mean.\n");
  for (int leg = 1; leg <= sample.p; ++leg) {
    line(out, at(leg, 0.0), at(leg, reach * 1.05), "black");
    text(out, at(leg, reach * 1.12), "leg " + std::to_string(leg));
  }
  for (const auto& x : sample.points) {
    dot(out, x.is_center() ? Xy{kMid, kMid} : at(x.leg(), x.u()), 3.0, "grey",
        "leg " + std::to_string(x.leg()) + " u=" + num(x.u()));
  }
  if (mean) {
    dot(out, mean->is_center() ? Xy{kMid, kMid} : at(mean->leg(), mean->u()), 5.0, "red",
        "mean leg " + std::to_string(mean->leg()) + " u=" + num(mean->u()));
  }
  out << "</svg>\n";
  return out.str();
}

std::string kneser_label(const Split& s) {
  std::vector<int> side = s.leaves();
  if (side.size() == 3) {
    std::vector<int> rest;
    for (int k = 1; k <= 4; ++k) {
      if (std::find(side.begin(), side.end(), k) == side.end()) rest.push_back(k);
    }
    rest.push_back(5);
    side = rest;
  }
  return "{" + std::to_string(side[0]) + "," + std::to_string(side[1]) + "}";
}

namespace {

// Outer 5-cycle listed by 2-subsets of {1..5}; each inner vertex sits under the outer vertex it
// is joined to, so the inner edges form a pentagram.
const std::array<std::array<int, 2>, 5> kOuter = {{{1, 2}, {3, 4}, {1, 5}, {2, 3}, {4, 5}}};

Split split_of_pair(int i, int j) {
  if (j == 5) {
    std::vector<int> rest;
    for (int k = 1; k <= 4; ++k) {
      if (k != i) rest.push_back(k);
    }
    return Split::from_leaves(rest);
  }
  return Split::from_leaves({i, j});
}

std::array<Xy, Split::kCount> vertex_positions() {
  std::array<Xy, Split::kCount> pos{};
  const double outer = kMid - 50.0;
  const double inner = outer * 0.45;
  for (int k = 0; k < 5; ++k) {
    const double angle = std::numbers::pi / 2.0 - 2.0 * std::numbers::pi * k / 5.0;
    const Split o = split_of_pair(kOuter[k][0], kOuter[k][1]);
    pos[o.index()] = Xy{kMid + outer * std::cos(angle), kMid - outer * std::sin(angle)};
    // The inner partner is the 2-subset disjoint from this vertex and from both outer neighbors.
    const auto& prev = kOuter[(k + 4) % 5];
    const auto& next = kOuter[(k + 1) % 5];
    for (const Split& s : Split::all()) {
      if (!s.compatible_with(o)) continue;
      if (s == split_of_pair(prev[0], prev[1]) || s == split_of_pair(next[0], next[1])) continue;
      pos[s.index()] = Xy{kMid + inner * std::cos(angle), kMid - inner * std::sin(angle)};
    }
  }
  return pos;
}

Xy project(const std::array<Xy, Split::kCount>& pos, const PetersenCoordinate& c) {
  const Xy a = pos[c.from.index()];
  if (!c.to) return a;
  const Xy b = pos[c.to->index()];
  return Xy{a.x + c.s * (b.x - a.x), a.y + c.s * (b.y - a.y)};
}

std::string edge_name(const PetersenCoordinate& c) {
  return c.to ? c.from.name() + "-" + c.to->name() : c.from.name();
}

}  // namespace

std::string petersen_svg(const T4Sample& sample, const std::optional<T4Point>& mean) {
  const auto pos = vertex_positions();
  std::ostringstream out;
  out << svg_open(
      "  Central projection of T4 onto the Petersen graph.\n"
      "  Vertices are clusters of leaves 1..4 seen from the root; the label in brackets is the\n"
      "  2-subset of {1..5} (5 = root) on the same side of the split.\n"
      "  Outer pentagon, clockwise from the top: {1,2} {3,4} {1,5} {2,3} {4,5}.\n"
      "  Each inner vertex lies under the outer vertex it is joined to; inner edges form a pentagram.\n"
      "  A point on edge u-v at angle fraction s is drawn at u + s (v - u).\n");
  for (const auto& q : enumerate_quadrants()) line(out, pos[q.first.index()], pos[q.second.index()], "black");
  for (const Split& s : Split::all()) {
    dot(out, pos[s.index()], 4.0, "black", s.name());
    const Xy p = pos[s.index()];
    const double dx = p.x - kMid, dy = p.y - kMid;
    const double r = std::hypot(dx, dy);
    text(out, Xy{p.x + 22.0 * dx / r, p.y + 22.0 * dy / r + 4.0}, s.name() + " [" + kneser_label(s) + "]");
  }
  for (const auto& x : sample.points) {
    if (x.is_origin()) continue;
    const auto c = petersen_projection(x);
    dot(out, project(pos, c), 3.0, "steelblue", edge_name(c) + " s=" + num(c.s) + " r=" + num(c.radius));
  }
  if (mean && !mean->is_origin()) {
    const auto c = petersen_projection(*mean);
    dot(out, project(pos, c), 5.0, "red", "mean " + edge_name(c) + " s=" + num(c.s) + " r=" + num(c.radius));
  }
  out << "</svg>\n";
  return out.str();
}

std::string petersen_csv(const T4Sample& sample) {
  std::ostringstream out;
  out << "edge,s,radius\n";
  for (const auto& x : sample.points) {
    if (x.is_origin()) {
      out << "origin,0,0\n";
      continue;
    }
    const auto c = petersen_projection(x);
    out << '"' << edge_name(c) << "\"," << format_shortest(c.s) << ',' << format_shortest(c.radius) << '\n';
  }
  return out.str();
}

}  // namespace stratree::plot
