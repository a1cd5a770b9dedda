#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcsnet/mobility.hpp"
#include "hcsnet/topology.hpp"
#include "hcsnet/units.hpp"

namespace hcsnet {

enum class HandoverScheme { kTraditional, kOptimized };

const char* to_string(HandoverScheme scheme);
HandoverScheme handover_scheme_from_string(const std::string& name);

struct HandoverPolicy {
  HandoverScheme scheme = HandoverScheme::kTraditional;
  double hysteresis_db = 3.0;
  double ttt_s = 0.16;
};

struct MeasurementReport {
  UeId ue = 0;
  double t = 0.0;
  RrhId serving = 0;
  double serving_rsrp_dbm = 0.0;
  RrhId best_neighbor = 0;
  double neighbor_rsrp_dbm = 0.0;
};

struct HandoverTrigger {
  UeId ue = 0;
  double t = 0.0;
  RrhId source = 0;
  RrhId target = 0;
};

// Streaming A3 check: fires once the best neighbour has exceeded the
// serving RRH by the hysteresis for ttt (inclusive), then stays quiet for
// that neighbour until the condition breaks.
class A3Monitor {
 public:
  explicit A3Monitor(HandoverPolicy policy) : policy_(policy) {}

  std::optional<HandoverTrigger> observe(const MeasurementReport& report);
  void reset();

 private:
  HandoverPolicy policy_;
  std::optional<double> last_t_;
  bool in_window_ = false;
  double window_start_ = 0.0;
  RrhId candidate_ = kNoRrh;
  RrhId serving_ = kNoRrh;
  bool latched_ = false;
};

// First trigger in a time-ordered report stream, if any.
std::optional<HandoverTrigger> evaluate_a3(
    std::span<const MeasurementReport> reports, const HandoverPolicy& policy);

enum class Decision { kProceed, kSuppress };

// Whether the policy lets this UE attach to a small cell at all.
bool permits_small_cell(const UeState& ue, const HandoverPolicy& policy);

Decision decide(const HandoverTrigger& trigger, const UeState& ue,
                const Rrh& target, const HandoverPolicy& policy);

enum class Hop { kAir, kIntraPool, kInterPoolX2, kCore };

enum class MessageName {
  kMeasurementReport,
  kHandoverDecision,
  kHandoverRequest,
  kAdmissionControl,
  kHandoverRequestAck,
  kRrcReconfiguration,
  kHandoverCompletion,
  kPathSwitch,
  kUeContextRelease,
};

const char* to_string(Hop hop);
const char* to_string(MessageName name);

// Unitless per-hop costs, proportional to signalling delay.
struct CostTable {
  double air = 1.0;
  double intra_pool = 1.0;
  double inter_pool_x2 = 3.0;
  double core = 5.0;

  double of(Hop hop) const;
};

struct SignalingMessage {
  MessageName name = MessageName::kMeasurementReport;
  Hop hop = Hop::kAir;
  double cost = 0.0;
};

// Full handover call flow. Crossing BBU pools adds the X2 legs, the core
// path switch and the context release.
std::vector<SignalingMessage> signaling_flow(RrhId source, RrhId target,
                                             const NetworkLayout& layout,
                                             const CostTable& costs);

// What a suppressed handover still pays: the report and the pool's decision.
std::vector<SignalingMessage> suppressed_flow(const CostTable& costs);

struct RlfTimers {
  double qout_db = -8.0;
  double qin_db = -6.0;
  double t_rlf_s = 0.5;
  double t_reconnect_s = 2.0;
};

struct RlfEvent {
  UeId ue = 0;
  double t = 0.0;
  RrhId rrh_at_failure = 0;
  RrhId reconnect_rrh = kNoRrh;  // kNoRrh: no reconnection
  double reconnect_t = 0.0;

  bool reconnected() const { return reconnect_rrh != kNoRrh; }
};

struct LinkSample {
  double t = 0.0;
  RrhId serving = 0;
  double sinr_db = 0.0;       // on the serving link
  RrhId best_rrh = 0;         // strongest admissible RRH right now
  double best_sinr_db = 0.0;  // SINR if served by best_rrh
};

// Radio-link monitoring: failure after SINR < qout for t_rlf (inclusive);
// then the UE reconnects to the strongest RRH at the first sample within
// t_reconnect whose SINR reaches qin, or the call drops.
class RlfMonitor {
 public:
  RlfMonitor(UeId ue, RlfTimers timers) : ue_(ue), timers_(timers) {}

  // Returns the completed event (reconnected or dropped).
  std::optional<RlfEvent> observe(const LinkSample& sample);
  // Out of service: failure declared, reconnection pending.
  bool failed() const { return failure_.has_value(); }
  // Closes a pending failure as a drop (e.g. at the end of a stream).
  std::optional<RlfEvent> flush();
  void reset();

 private:
  UeId ue_;
  RlfTimers timers_;
  std::optional<double> last_t_;
  bool below_ = false;
  double below_since_ = 0.0;
  std::optional<RlfEvent> failure_;
};

// First RLF in a time-ordered stream for one UE.
std::optional<RlfEvent> detect_rlf(std::span<const LinkSample> stream,
                                   const RlfTimers& timers, UeId ue = 0);

enum class HandoverLabel {
  kNormal,
  kPingPong,
  kContinue,
  kLate,
  kEarly,
  kWrong,
  kCallDrop,
};

const char* to_string(HandoverLabel label);

struct HandoverRecord {
  UeId ue = 0;
  double t_complete = 0.0;
  RrhId source = 0;
  RrhId target = kNoRrh;
  RrhKind target_kind = RrhKind::kMacro;
  bool inter_pool = false;
  bool suppressed = false;  // a trigger the policy declined
  bool failure = false;     // synthesised from an RLF, carries no messages
  std::vector<SignalingMessage> messages;
  HandoverLabel label = HandoverLabel::kNormal;

  double overhead() const;
};

// Labels one UE's completed handovers from the time-ordered handover and
// RLF history. A timer of t_crit (inclusive) starts at every completion:
// a handover back to the source is ping-pong, to a third RRH a continue;
// an RLF reconnecting to the source is early, to a third RRH wrong, and
// without reconnection a call drop. An RLF outside any timer becomes a
// failure record: late when the UE reconnects elsewhere, call drop when
// it never reconnects. Suppressed records are passed through unlabelled.
std::vector<HandoverRecord> classify_handover(
    std::span<const HandoverRecord> handovers, std::span<const RlfEvent> rlfs,
    double t_crit_s);

// Classifies every UE independently and returns records ordered by
// (t_complete, ue).
std::vector<HandoverRecord> classify_all(std::span<const HandoverRecord> handovers,
                                         std::span<const RlfEvent> rlfs,
                                         double t_crit_s);

double overhead_of(std::span<const HandoverRecord> records,
                   bool count_suppressed_reports = true);

// t_s,ue_id,source,target,inter_pool,label,overhead
std::string handover_log_csv(std::span<const HandoverRecord> records);

}  // namespace hcsnet
