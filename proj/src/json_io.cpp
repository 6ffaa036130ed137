#include "stratree/json_io.hpp"

#include "stratree/errors.hpp"

namespace stratree::json_io {

namespace {

// Runs fn, turning nlohmann type and range errors into ConfigError.
template <typename F>
auto guarded(const char* what, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + ": " + e.what());
  }
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<double> weights_of(const Json& j) {
  if (j.is_object() && j.contains("weights")) return j.at("weights").get<std::vector<double>>();
  return {};
}

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const SpiderSample& s) {
  Json j;
  j["p"] = s.p;
  Json pts = Json::array();
  for (const auto& x : s.points) pts.push_back(to_json(x));
  j["points"] = pts;
  if (!s.weights.empty()) j["weights"] = s.weights;
  return j;
}

SpiderSample spider_sample_from_json(const Json& j) {
  return guarded("spider sample", [&] {
    SpiderSample s;
    s.p = field(j, "p").get<int>();
    for (const auto& pt : field(j, "points")) {
      const int leg = field(pt, "leg").get<int>();
      const double u = field(pt, "u").get<double>();
      s.points.push_back(leg == 0 && u == 0.0 ? SpiderPoint::center() : SpiderPoint::on_leg(leg, u));
    }
    s.weights = weights_of(j);
    s.validate();
    return s;
  });
}

Json to_json(const T4Point& x) {
  Json splits = Json::array();
  for (const auto& [split, len] : x.coords()) {
    Json c;
    c["cluster"] = split.leaves();
    c["length"] = len;
    splits.push_back(c);
  }
  Json j;
  j["splits"] = splits;
  return j;
}

T4Point t4_point_from_json(const Json& j) {
  return guarded("T4 point", [&] {
    std::vector<T4Point::Coord> coords;
    for (const auto& c : field(j, "splits")) {
      coords.emplace_back(Split::from_leaves(field(c, "cluster").get<std::vector<int>>()),
                          field(c, "length").get<double>());
    }
    return T4Point::make(std::move(coords));
  });
}

Json to_json(const T4Sample& s) {
  Json pts = Json::array();
  for (const auto& x : s.points) pts.push_back(to_json(x));
  Json j;
  j["points"] = pts;
  if (!s.weights.empty()) j["weights"] = s.weights;
  return j;
}

T4Sample t4_sample_from_json(const Json& j) {
  return guarded("T4 sample", [&] {
    T4Sample s;
    const Json& pts = j.is_array() ? j : field(j, "points");
    if (!pts.is_array()) throw ConfigError("T4 sample points must be a list");
    for (const auto& p : pts) s.points.push_back(t4_point_from_json(p));
    s.weights = weights_of(j);
    s.validate();
    return s;
  });
}

Json to_json(const OpenBookSample& s) {
  Json pts = Json::array();
  for (const auto& x : s.points) {
    Json p;
    p["leaf"] = x.leaf();
    p["x1"] = x.x1();
    p["x2"] = x.x2();
    pts.push_back(p);
  }
  Json j;
  j["points"] = pts;
  if (!s.weights.empty()) j["weights"] = s.weights;
  return j;
}

OpenBookSample openbook_sample_from_json(const Json& j) {
  return guarded("open-book sample", [&] {
    OpenBookSample s;
    for (const auto& p : field(j, "points")) {
      const int leaf = field(p, "leaf").get<int>();
      const double x1 = field(p, "x1").get<double>();
      const double x2 = p.contains("x2") ? p.at("x2").get<double>() : 0.0;
      if (leaf == OpenBookPoint::kSpine && x2 != 0.0) throw ConfigError("spine points must have x2 = 0");
      s.points.push_back(leaf == OpenBookPoint::kSpine ? OpenBookPoint::spine(x1) : OpenBookPoint::on_leaf(leaf, x1, x2));
    }
    s.weights = weights_of(j);
    s.validate();
    return s;
  });
}

SpiderMeasureSummary summary_from_json(const Json& j) {
  return guarded("measure summary", [&] {
    const double w0 = j.is_object() && j.contains("w0") ? j.at("w0").get<double>() : 0.0;
    return SpiderMeasureSummary::from_moments(field(j, "w").get<std::vector<double>>(),
                                              field(j, "nu").get<std::vector<double>>(), w0);
  });
}

namespace {

LegDistribution distribution_from_json(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  LegDistribution d;
  if (type == "point_mass") {
    d = LegDistribution::point_mass(field(j, "u").get<double>());
  } else if (type == "uniform") {
    d = LegDistribution::uniform(field(j, "lo").get<double>(), field(j, "hi").get<double>());
  } else if (type == "exponential") {
    d = LegDistribution::exponential(field(j, "rate").get<double>());
  } else {
    throw ConfigError("unknown distribution type '" + type + "'");
  }
  try {
    d.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return d;
}

}  // namespace

bool is_openbook_law(const Json& j) {
  return j.is_object() && j.contains("space") && j.at("space").is_string() && j.at("space") == "openbook";
}

SpiderLaw spider_law_from_json(const Json& j) {
  return guarded("spider law", [&] {
    SpiderLaw law;
    law.weights = field(j, "weights").get<std::vector<double>>();
    law.p = j.contains("p") ? j.at("p").get<int>() : static_cast<int>(law.weights.size());
    for (const auto& leg : field(j, "legs")) law.legs.push_back(distribution_from_json(leg));
    try {
      law.validate();
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
    return law;
  });
}

OpenBookLaw openbook_law_from_json(const Json& j) {
  return guarded("open-book law", [&] {
    OpenBookLaw law;
    const auto w = field(j, "weights").get<std::vector<double>>();
    const Json& leaves = field(j, "leaves");
    if (w.size() != 3 || !leaves.is_array() || leaves.size() != 3) {
      throw ConfigError("an open-book law needs three weights and three leaves");
    }
    for (int k = 0; k < 3; ++k) {
      law.weights[k] = w[k];
      law.x1[k] = distribution_from_json(field(leaves[k], "x1"));
      law.x2[k] = distribution_from_json(field(leaves[k], "x2"));
    }
    try {
      law.validate();
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
    return law;
  });
}

Json to_json(const SpiderPoint& x) {
  Json j;
  j["leg"] = x.leg();
  j["u"] = x.u();
  return j;
}

Json to_json(const StickinessReport& r) {
  Json j;
  j["theta"] = r.theta;
  j["verdict"] = to_string(r.verdict);
  j["leg"] = r.leg;
  j["mean"] = to_json(r.mean);
  if (r.intrinsic_sd) j["intrinsic_sd"] = *r.intrinsic_sd;
  return j;
}

Json to_json(const SpineStickinessReport& r) {
  Json j;
  j["x1_star"] = r.x1_star;
  j["theta2"] = r.theta2;
  j["verdict"] = to_string(r.verdict);
  j["leaf"] = r.leaf;
  Json m;
  m["leaf"] = r.mean.leaf();
  m["x1"] = r.mean.x1();
  m["x2"] = r.mean.x2();
  j["mean"] = m;
  j["spine_sd"] = r.spine_sd;
  j["intrinsic_sd"] = r.intrinsic_sd;
  return j;
}

Json to_json(const SpineInterval& iv) {
  Json j;
  j["confidence"] = iv.confidence;
  j["estimate"] = iv.estimate;
  j["lower"] = iv.lower;
  j["upper"] = iv.upper;
  j["half_width"] = iv.half_width;
  return j;
}

Json to_json(const SpiderInterval& iv) {
  Json j;
  j["regime"] = to_string(iv.regime);
  j["leg"] = iv.leg;
  j["confidence"] = iv.confidence;
  j["estimate"] = iv.estimate;
  j["lower"] = iv.lower;
  j["upper"] = iv.upper;
  j["half_width"] = iv.half_width;
  j["note"] = iv.note;
  return j;
}

Json to_json(const T4MeanDiagnostics& d) {
  Json j;
  j["frechet_value"] = d.frechet_value;
  j["last_epoch_movement"] = d.last_epoch_movement;
  j["epochs_run"] = d.epochs_run;
  j["converged"] = d.converged;
  j["refinement_shift"] = d.refinement_shift;
  return j;
}

Json to_json(const PetersenCoordinate& c) {
  Json j;
  j["from"] = c.from.leaves();
  if (c.to) {
    j["to"] = c.to->leaves();
  } else {
    j["to"] = nullptr;
  }
  j["s"] = c.s;
  j["radius"] = c.radius;
  return j;
}

Json to_json(const SimReport& r) {
  Json j;
  j["regime"] = r.regime;
  j["n"] = r.n;
  j["replications"] = r.replications;
  j["seed"] = r.seed;
  j["stick_fraction"] = r.stick_fraction;
  Json ks = Json::array();
  for (const auto& k : r.ks) {
    Json e;
    e["coordinate"] = k.coordinate;
    e["reference"] = k.reference;
    e["statistic"] = k.statistic;
    e["p_value"] = k.p_value;
    ks.push_back(e);
  }
  j["ks"] = ks;
  j["degenerate"] = r.degenerate;
  return j;
}

Json to_json(const CoverageReport& r) {
  Json j;
  j["replications"] = r.replications;
  j["covered"] = r.covered;
  j["off_spine"] = r.off_spine;
  j["coverage"] = r.coverage;
  return j;
}

}  // namespace stratree::json_io
