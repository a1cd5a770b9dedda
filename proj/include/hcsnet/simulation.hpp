#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hcsnet/channel.hpp"
#include "hcsnet/config.hpp"
#include "hcsnet/handover.hpp"
#include "hcsnet/metrics.hpp"
#include "hcsnet/mobility.hpp"
#include "hcsnet/topology.hpp"

namespace hcsnet {

inline constexpr std::size_t kLabelCount = 7;

struct OverheadSummary {
  std::string scheme;  // handover scheme name
  std::size_t handovers = 0;
  std::size_t suppressed = 0;
  std::size_t rlf_events = 0;
  std::array<std::size_t, kLabelCount> label_counts{};  // by HandoverLabel
  double overhead = 0.0;
  double overhead_to_srrh = 0.0;  // completed handovers into small cells only
};

// One coordinated cluster picked by a scheme, as written to clusters.csv.
struct ClusterRow {
  std::string scheme;
  RrhId anchor = 0;
  std::vector<RrhId> members;
  RrhId exemplar = 0;
  std::size_t iterations = 0;
  bool converged = true;
};

struct TraceRow {
  double t = 0.0;
  UeId ue = 0;
  Point2 position;
  SpeedClass speed_class = SpeedClass::kLow;
  RrhId serving = kNoRrh;  // kNoRrh while idle
};

struct RunOptions {
  bool record_trace = false;  // per-step UE positions, off by default (large)
};

struct ScenarioResult {
  NetworkLayout layout;
  std::vector<LinkBudget> links;   // snapshot link budgets, one per UE
  std::vector<SampleSet> edge_se;  // one per clustering scheme, none first
  std::vector<RunTiming> timings;  // CoMP schemes only
  std::vector<ClusterRow> clusters;
  std::vector<HandoverRecord> handover_log;  // classified
  std::vector<RlfEvent> rlf_events;
  OverheadSummary overhead;
  std::vector<TraceRow> trace;  // empty unless requested
};

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

std::string trace_csv(std::span<const TraceRow> rows);

// Ordered scalar view of a run used by sweeps.
std::vector<std::pair<std::string, double>> scalar_metrics(const ScenarioResult& result);

struct SweepSpec {
  std::string parameter;  // dotted key into the config document
  std::vector<nlohmann::json> values;
  std::size_t replications = 1;
};

struct SweepStat {
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one replication
};

struct SweepPoint {
  nlohmann::json value;
  std::size_t replications = 0;
  std::vector<SweepStat> stats;

  const SweepStat& stat(const std::string& metric) const;
};

struct SweepTable {
  std::string parameter;
  std::string handover_scheme;
  std::vector<SweepPoint> points;
};

// Seed of one replication. Replication 0 keeps the base seed, so a single
// replication reproduces run_scenario; the swept value is deliberately not
// mixed in, giving every point common random numbers.
std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t replication);

SweepTable run_sweep(const nlohmann::json& config_doc, const SweepSpec& sweep);

}  // namespace hcsnet
