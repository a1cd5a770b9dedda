#include "hcsnet/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hcsnet/error.hpp"

namespace hcsnet {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads one JSON object, remembering which keys were consumed so that
// leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  void number(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(join(path_, key), "must be finite");
    }
  }

  template <typename Unsigned>
  void count(const std::string& key, Unsigned& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                      v->get<std::int64_t>() < 0)) {
        throw ConfigError(join(path_, key), "expected a non-negative integer");
      }
      const auto raw = v->get<std::uint64_t>();
      if (raw > std::numeric_limits<Unsigned>::max()) {
        throw ConfigError(join(path_, key), "integer out of range");
      }
      out = static_cast<Unsigned>(raw);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected a boolean");
      out = v->get<bool>();
    }
  }

  std::optional<std::string> string(const std::string& key) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
      return v->get<std::string>();
    }
    return std::nullopt;
  }

  void pair(const std::string& key, double& first, double& second) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() ||
          !(*v)[1].is_number()) {
        throw ConfigError(join(path_, key), "expected a two-number array");
      }
      first = (*v)[0].get<double>();
      second = (*v)[1].get<double>();
    }
  }

  std::optional<ObjectReader> object(const std::string& key) {
    if (const json* v = take(key)) return ObjectReader(*v, join(path_, key));
    return std::nullopt;
  }

  const json* raw(const std::string& key) { return take(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(join(path_, key), "unknown key");
    }
  }

 private:
  const json* take(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_object(ObjectReader& parent, const std::string& key, Fn&& fn) {
  if (auto child = parent.object(key)) {
    fn(*child);
    child->finish();
  }
}

void read_layout(ObjectReader& r, LayoutConfig& c) {
  r.pair("region_m", c.region.width_m, c.region.height_m);
  r.count("mrrh_count", c.mrrh_count);
  r.number("mrrh_isd_m", c.mrrh_isd_m);
  r.count("srrh_count", c.srrh_count);
  r.number("srrh_min_mrrh_distance_m", c.srrh_min_mrrh_distance_m);
  r.number("mrrh_tx_dbm", c.mrrh_tx_dbm);
  r.number("srrh_tx_dbm", c.srrh_tx_dbm);
  if (const json* v = r.raw("pool_tiles")) {
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_unsigned() ||
        !(*v)[1].is_number_unsigned()) {
      throw ConfigError(r.path("pool_tiles"), "expected [cols, rows] integers");
    }
    c.pool_cols = (*v)[0].get<std::uint32_t>();
    c.pool_rows = (*v)[1].get<std::uint32_t>();
  }
}

void read_law(ObjectReader& r, PathLossLaw& law) {
  r.number("intercept_db", law.intercept_db);
  r.number("slope_db", law.slope_db);
}

void read_channel(ObjectReader& r, ChannelModel& c) {
  with_object(r, "macro_pl", [&](ObjectReader& o) { read_law(o, c.macro_pl); });
  with_object(r, "small_pl", [&](ObjectReader& o) { read_law(o, c.small_pl); });
  r.number("shadowing_sigma_macro_db", c.shadowing_sigma_macro_db);
  r.number("shadowing_sigma_small_db", c.shadowing_sigma_small_db);
  r.number("noise_dbm", c.noise_dbm);
  r.number("min_distance_m", c.min_distance_m);
}

void read_clustering(ObjectReader& r, ClusteringConfig& c) {
  if (auto s = r.string("scheme")) {
    c.scheme = *s == "all" ? std::nullopt
                           : std::optional(clustering_scheme_from_string(*s));
  }
  if (const json* v = r.raw("preference")) {
    if (v->is_string() && v->get<std::string>() == "median") {
      c.preference.reset();
    } else if (v->is_number()) {
      c.preference = v->get<double>();
    } else {
      throw ConfigError(r.path("preference"), "expected a number or \"median\"");
    }
  }
  r.number("damping", c.damping);
  r.count("max_iter", c.max_iter);
  r.count("stable_window", c.stable_window);
  r.number("rsrp_threshold_db", c.rsrp_threshold_db);
  r.count("max_measurement_size", c.max_measurement_size);
  r.number("trigger_threshold_db", c.trigger_threshold_db);
  r.count("static_cluster_size", c.static_cluster_size);
  r.count("sim_cluster_size", c.sim_cluster_size);
  r.count("pcg_realizations", c.pcg_realizations);
  r.number("edge_fraction", c.edge_fraction);
  r.count("timing_repetitions", c.timing_repetitions);
}

void read_mobility(ObjectReader& r, MobilityConfig& c) {
  r.number("alpha", c.alpha);
  r.number("mean_session_s", c.mean_session_s);
  r.number("mean_idle_s", c.mean_idle_s);
  if (auto m = r.string("model")) c.model = mobility_model_from_string(*m);
  with_object(r, "speeds_mps", [&](ObjectReader& o) {
    o.number("low", c.speeds.low_mps);
    o.number("medium", c.speeds.medium_mps);
    o.number("high", c.speeds.high_mps);
  });
  with_object(r, "speed_thresholds_mps", [&](ObjectReader& o) {
    o.number("low_max", c.thresholds.low_max_mps);
    o.number("medium_max", c.thresholds.medium_max_mps);
  });
}

void read_handover(ObjectReader& r, HandoverConfig& c) {
  if (auto s = r.string("scheme")) c.policy.scheme = handover_scheme_from_string(*s);
  r.number("hysteresis_db", c.policy.hysteresis_db);
  r.number("ttt_s", c.policy.ttt_s);
  r.number("t_crit_s", c.t_crit_s);
  r.number("qout_db", c.rlf.qout_db);
  r.number("qin_db", c.rlf.qin_db);
  r.number("t_rlf_s", c.rlf.t_rlf_s);
  r.number("t_reconnect_s", c.rlf.t_reconnect_s);
  with_object(r, "costs", [&](ObjectReader& o) {
    o.number("air", c.costs.air);
    o.number("intra", c.costs.intra_pool);
    o.number("x2", c.costs.inter_pool_x2);
    o.number("core", c.costs.core);
  });
  r.boolean("count_suppressed_reports", c.count_suppressed_reports);
}

void read_sim(ObjectReader& r, SimConfig& c) {
  r.number("duration_s", c.duration_s);
  r.number("step_s", c.step_s);
  r.count("ue_count", c.ue_count);
  r.count("seed", c.seed);
}

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

std::vector<ClusteringScheme> ClusteringConfig::schemes() const {
  if (!scheme) {
    return {ClusteringScheme::kNone, ClusteringScheme::kStatic,
            ClusteringScheme::kSim, ClusteringScheme::kApbc};
  }
  if (*scheme == ClusteringScheme::kNone) return {ClusteringScheme::kNone};
  return {ClusteringScheme::kNone, *scheme};
}

ApbcOptions ClusteringConfig::apbc_options() const {
  ApbcOptions o;
  o.rsrp_threshold_db = rsrp_threshold_db;
  o.max_measurement_size = max_measurement_size;
  o.pcg_realizations = pcg_realizations;
  o.median_preference = !preference.has_value();
  o.preference = preference.value_or(0.0);
  o.ap.damping = damping;
  o.ap.max_iter = max_iter;
  o.ap.stable_window = stable_window;
  return o;
}

void validate(const ScenarioConfig& c) {
  require(c.layout.region.width_m > 0 && c.layout.region.height_m > 0,
          "layout.region_m", "region dimensions must be positive");
  require(c.layout.mrrh_count + c.layout.srrh_count > 0, "layout",
          "layout needs at least one RRH");
  require(c.layout.mrrh_isd_m > 0, "layout.mrrh_isd_m", "must be positive");
  require(c.layout.srrh_min_mrrh_distance_m >= 0, "layout.srrh_min_mrrh_distance_m",
          "must be non-negative");
  require(c.layout.pool_cols > 0 && c.layout.pool_rows > 0, "layout.pool_tiles",
          "needs at least one tile");
  validate(c.channel);

  const ClusteringConfig& k = c.clustering;
  require(k.damping >= 0 && k.damping < 1, "clustering.damping", "must lie in [0, 1)");
  require(k.max_iter >= 1, "clustering.max_iter", "must be at least 1");
  require(k.stable_window >= 1, "clustering.stable_window", "must be at least 1");
  require(k.rsrp_threshold_db >= 0, "clustering.rsrp_threshold_db", "must be non-negative");
  require(k.max_measurement_size >= 1, "clustering.max_measurement_size",
          "must be at least 1");
  require(k.static_cluster_size >= 1, "clustering.static_cluster_size", "must be at least 1");
  require(k.sim_cluster_size >= 1, "clustering.sim_cluster_size", "must be at least 1");
  require(k.pcg_realizations >= 1, "clustering.pcg_realizations", "must be at least 1");
  require(k.edge_fraction > 0 && k.edge_fraction <= 1, "clustering.edge_fraction",
          "must lie in (0, 1]");
  require(k.timing_repetitions >= 1, "clustering.timing_repetitions", "must be at least 1");

  validate(c.mobility);

  const HandoverConfig& h = c.handover;
  require(h.policy.hysteresis_db >= 0, "handover.hysteresis_db", "must be non-negative");
  require(h.policy.ttt_s >= 0, "handover.ttt_s", "must be non-negative");
  require(h.t_crit_s > 0, "handover.t_crit_s", "must be positive");
  require(h.rlf.qin_db >= h.rlf.qout_db, "handover.qin_db", "must not be below qout_db");
  require(h.rlf.t_rlf_s >= 0, "handover.t_rlf_s", "must be non-negative");
  require(h.rlf.t_reconnect_s >= 0, "handover.t_reconnect_s", "must be non-negative");
  require(h.costs.air >= 0, "handover.costs.air", "must be non-negative");
  require(h.costs.intra_pool >= 0, "handover.costs.intra", "must be non-negative");
  require(h.costs.inter_pool_x2 >= 0, "handover.costs.x2", "must be non-negative");
  require(h.costs.core >= 0, "handover.costs.core", "must be non-negative");

  require(c.sim.duration_s >= 0, "sim.duration_s", "must be non-negative");
  require(c.sim.step_s > 0, "sim.step_s", "must be positive");
  require(c.sim.ue_count >= 1, "sim.ue_count", "must be at least 1");
}

ScenarioConfig config_from_json(const json& doc) {
  ScenarioConfig c;
  if (doc.is_null()) return c;
  ObjectReader root(doc, "");
  with_object(root, "layout", [&](ObjectReader& r) { read_layout(r, c.layout); });
  with_object(root, "channel", [&](ObjectReader& r) { read_channel(r, c.channel); });
  with_object(root, "clustering", [&](ObjectReader& r) { read_clustering(r, c.clustering); });
  with_object(root, "mobility", [&](ObjectReader& r) { read_mobility(r, c.mobility); });
  with_object(root, "handover", [&](ObjectReader& r) { read_handover(r, c.handover); });
  with_object(root, "sim", [&](ObjectReader& r) { read_sim(r, c.sim); });
  root.finish();
  validate(c);
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](unsigned char ch) { return std::isspace(ch); });
  if (blank) return config_from_json(json::object());
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.what());
  }
  return config_from_json(doc);
}

json to_json(const ScenarioConfig& c) {
  const auto law = [](const PathLossLaw& l) {
    return json{{"intercept_db", l.intercept_db}, {"slope_db", l.slope_db}};
  };
  json doc;
  doc["layout"] = {
      {"region_m", {c.layout.region.width_m, c.layout.region.height_m}},
      {"mrrh_count", c.layout.mrrh_count},
      {"mrrh_isd_m", c.layout.mrrh_isd_m},
      {"srrh_count", c.layout.srrh_count},
      {"srrh_min_mrrh_distance_m", c.layout.srrh_min_mrrh_distance_m},
      {"mrrh_tx_dbm", c.layout.mrrh_tx_dbm},
      {"srrh_tx_dbm", c.layout.srrh_tx_dbm},
      {"pool_tiles", {c.layout.pool_cols, c.layout.pool_rows}},
  };
  doc["channel"] = {
      {"macro_pl", law(c.channel.macro_pl)},
      {"small_pl", law(c.channel.small_pl)},
      {"shadowing_sigma_macro_db", c.channel.shadowing_sigma_macro_db},
      {"shadowing_sigma_small_db", c.channel.shadowing_sigma_small_db},
      {"noise_dbm", c.channel.noise_dbm},
      {"min_distance_m", c.channel.min_distance_m},
  };
  const ClusteringConfig& k = c.clustering;
  doc["clustering"] = {
      {"scheme", k.scheme ? to_string(*k.scheme) : "all"},
      {"preference", k.preference ? json(*k.preference) : json("median")},
      {"damping", k.damping},
      {"max_iter", k.max_iter},
      {"stable_window", k.stable_window},
      {"rsrp_threshold_db", k.rsrp_threshold_db},
      {"max_measurement_size", k.max_measurement_size},
      {"trigger_threshold_db", k.trigger_threshold_db},
      {"static_cluster_size", k.static_cluster_size},
      {"sim_cluster_size", k.sim_cluster_size},
      {"pcg_realizations", k.pcg_realizations},
      {"edge_fraction", k.edge_fraction},
      {"timing_repetitions", k.timing_repetitions},
  };
  const MobilityConfig& m = c.mobility;
  doc["mobility"] = {
      {"alpha", m.alpha},
      {"mean_session_s", m.mean_session_s},
      {"mean_idle_s", m.mean_idle_s},
      {"model", to_string(m.model)},
      {"speeds_mps",
       {{"low", m.speeds.low_mps}, {"medium", m.speeds.medium_mps},
        {"high", m.speeds.high_mps}}},
      {"speed_thresholds_mps",
       {{"low_max", m.thresholds.low_max_mps},
        {"medium_max", m.thresholds.medium_max_mps}}},
  };
  const HandoverConfig& h = c.handover;
  doc["handover"] = {
      {"scheme", to_string(h.policy.scheme)},
      {"hysteresis_db", h.policy.hysteresis_db},
      {"ttt_s", h.policy.ttt_s},
      {"t_crit_s", h.t_crit_s},
      {"qout_db", h.rlf.qout_db},
      {"qin_db", h.rlf.qin_db},
      {"t_rlf_s", h.rlf.t_rlf_s},
      {"t_reconnect_s", h.rlf.t_reconnect_s},
      {"costs",
       {{"air", h.costs.air}, {"intra", h.costs.intra_pool},
        {"x2", h.costs.inter_pool_x2}, {"core", h.costs.core}}},
      {"count_suppressed_reports", h.count_suppressed_reports},
  };
  doc["sim"] = {
      {"duration_s", c.sim.duration_s},
      {"step_s", c.sim.step_s},
      {"ue_count", c.sim.ue_count},
      {"seed", c.sim.seed},
  };
  return doc;
}

std::string serialize_config(const ScenarioConfig& config) {
  return to_json(config).dump(2) + "\n";
}

json with_value(const json& doc, const std::string& dotted_key, const json& value) {
  if (dotted_key.empty()) throw ConfigError(dotted_key, "empty parameter path");
  std::string pointer;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part = dotted_key.substr(start, dot - start);
    if (part.empty()) throw ConfigError(dotted_key, "malformed parameter path");
    pointer += "/" + part;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  const json::json_pointer ptr(pointer);
  if (!doc.contains(ptr) || doc.at(ptr).is_object()) {
    throw ConfigError(dotted_key, "parameter path does not name a configuration value");
  }
  json out = doc;
  out[ptr] = value;
  return out;
}

json parse_value_literal(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

}  // namespace hcsnet
