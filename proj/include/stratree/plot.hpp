#pragma once

// Static SVG and CSV renderings of spider and T4 samples.

#include <optional>
#include <string>

#include "stratree/spider.hpp"
#include "stratree/t4space.hpp"

namespace stratree::plot {

// Legs drawn as rays from the center, leg 1 pointing up and the rest spaced evenly clockwise.
std::string spider_svg(const SpiderSample& sample, const std::optional<SpiderPoint>& mean = std::nullopt);

// Each axis is identified with the 2-subset of {1..5} on its side of the split, where 5 is the
// root; two axes share a quadrant exactly when their 2-subsets are disjoint.
std::string kneser_label(const Split& s);

// Central projection of every non-origin point onto a fixed drawing of the Petersen graph.
std::string petersen_svg(const T4Sample& sample, const std::optional<T4Point>& mean = std::nullopt);
// Rows of (edge, s, radius); edge is "{1,2}" for a vertex or "{1,2}-{1,2,3}" for an edge.
std::string petersen_csv(const T4Sample& sample);

}  // namespace stratree::plot
