#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hcsnet/channel.hpp"
#include "hcsnet/clustering.hpp"
#include "hcsnet/handover.hpp"
#include "hcsnet/mobility.hpp"
#include "hcsnet/topology.hpp"

namespace hcsnet {

struct ClusteringConfig {
  // nullopt evaluates every scheme ("all").
  std::optional<ClusteringScheme> scheme;
  // nullopt uses the median off-diagonal similarity.
  std::optional<double> preference;
  double damping = 0.5;
  std::size_t max_iter = 200;
  std::size_t stable_window = 10;
  double rsrp_threshold_db = 20.0;
  std::size_t max_measurement_size = 7;
  double trigger_threshold_db = 0.0;
  std::size_t static_cluster_size = 3;
  std::size_t sim_cluster_size = 3;
  std::size_t pcg_realizations = 10;
  double edge_fraction = 0.2;
  std::size_t timing_repetitions = 5;

  std::vector<ClusteringScheme> schemes() const;
  ApbcOptions apbc_options() const;
};

struct HandoverConfig {
  HandoverPolicy policy;
  CostTable costs;
  RlfTimers rlf;
  double t_crit_s = 1.0;
  bool count_suppressed_reports = true;
};

struct SimConfig {
  double duration_s = 300.0;
  double step_s = 0.1;
  std::uint32_t ue_count = 100;
  std::uint64_t seed = 1;
};

struct ScenarioConfig {
  LayoutConfig layout;
  ChannelModel channel;
  ClusteringConfig clustering;
  MobilityConfig mobility;
  HandoverConfig handover;
  SimConfig sim;
};

// Strict parse: unknown keys, type mismatches and range violations raise
// ConfigError naming the dotted key. An empty document yields defaults.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig config_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ScenarioConfig& config);
std::string serialize_config(const ScenarioConfig& config);

void validate(const ScenarioConfig& config);

// Replaces the value at a dotted key in a fully populated document.
// Throws ConfigError when the key does not name an existing leaf.
nlohmann::json with_value(const nlohmann::json& doc, const std::string& dotted_key,
                          const nlohmann::json& value);

// Reads a command-line value: JSON when it parses, a bare string otherwise.
nlohmann::json parse_value_literal(const std::string& text);

}  // namespace hcsnet
