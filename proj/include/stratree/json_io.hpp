#pragma once

// JSON forms of samples, laws and reports. Malformed documents raise ConfigError.

#include <string>

#include "json.hpp"
#include "stratree/mcsim.hpp"
#include "stratree/openbook.hpp"
#include "stratree/spider.hpp"
#include "stratree/t4space.hpp"

namespace stratree::json_io {

using Json = nlohmann::ordered_json;

Json parse(const std::string& text);
std::string dump(const Json& j);  // two-space indent and a trailing newline

// {"p":3,"points":[{"leg":1,"u":0.2},...],"weights":[...]}; leg 0 is the center.
Json to_json(const SpiderSample& s);
SpiderSample spider_sample_from_json(const Json& j);

// {"splits":[{"cluster":[1,2],"length":0.3},...]}
Json to_json(const T4Point& x);
T4Point t4_point_from_json(const Json& j);
// Either a bare list of points or {"points":[...],"weights":[...]}.
Json to_json(const T4Sample& s);
T4Sample t4_sample_from_json(const Json& j);

// {"points":[{"leaf":1,"x1":0.5,"x2":0.2},...]}; leaf 0 is the spine.
Json to_json(const OpenBookSample& s);
OpenBookSample openbook_sample_from_json(const Json& j);

// {"w":[...],"nu":[...],"w0":0}
SpiderMeasureSummary summary_from_json(const Json& j);

// {"space":"spider","p":3,"weights":[...],"legs":[{"type":"uniform","lo":0,"hi":2},...]}
// {"space":"openbook","weights":[...],"leaves":[{"x1":{...},"x2":{...}},...]}
// Distributions: {"type":"point_mass","u":1}, {"type":"uniform","lo":0,"hi":2},
// {"type":"exponential","rate":1}.
bool is_openbook_law(const Json& j);
SpiderLaw spider_law_from_json(const Json& j);
OpenBookLaw openbook_law_from_json(const Json& j);

Json to_json(const SpiderPoint& x);
Json to_json(const StickinessReport& r);
Json to_json(const SpineStickinessReport& r);
Json to_json(const SpineInterval& iv);
Json to_json(const SpiderInterval& iv);
Json to_json(const T4MeanDiagnostics& d);
Json to_json(const PetersenCoordinate& c);
// Runtime is left out so that reports are reproducible byte for byte.
Json to_json(const SimReport& r);
Json to_json(const CoverageReport& r);

}  // namespace stratree::json_io
