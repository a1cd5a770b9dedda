#include "hcsnet/handover.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "csv_format.hpp"
#include "hcsnet/error.hpp"

namespace hcsnet {

namespace {

// Absorbs rounding in accumulated step times at window boundaries.
constexpr double kTimeEps = 1e-9;

void check_order(std::optional<double>& last, double t, const char* what) {
  if (last && t < *last) {
    throw SequencingError(std::string(what) + " out of time order");
  }
  last = t;
}

}  // namespace

const char* to_string(HandoverScheme scheme) {
  return scheme == HandoverScheme::kTraditional ? "traditional" : "optimized";
}

HandoverScheme handover_scheme_from_string(const std::string& name) {
  if (name == "traditional") return HandoverScheme::kTraditional;
  if (name == "optimized") return HandoverScheme::kOptimized;
  throw ConfigError("handover.scheme", "unknown scheme '" + name + "'");
}

std::optional<HandoverTrigger> A3Monitor::observe(const MeasurementReport& report) {
  check_order(last_t_, report.t, "measurement reports");
  if (report.serving != serving_) {
    reset();
    serving_ = report.serving;
  }
  const bool entering = report.best_neighbor != report.serving &&
                        report.neighbor_rsrp_dbm >
                            report.serving_rsrp_dbm + policy_.hysteresis_db;
  if (!entering) {
    in_window_ = false;
    candidate_ = kNoRrh;
    latched_ = false;
    return std::nullopt;
  }
  if (!in_window_ || candidate_ != report.best_neighbor) {
    in_window_ = true;
    window_start_ = report.t;
    candidate_ = report.best_neighbor;
    latched_ = false;
  }
  if (!latched_ && report.t - window_start_ >= policy_.ttt_s - kTimeEps) {
    latched_ = true;
    return HandoverTrigger{report.ue, report.t, report.serving, report.best_neighbor};
  }
  return std::nullopt;
}

void A3Monitor::reset() {
  in_window_ = false;
  candidate_ = kNoRrh;
  serving_ = kNoRrh;
  latched_ = false;
}

std::optional<HandoverTrigger> evaluate_a3(
    std::span<const MeasurementReport> reports, const HandoverPolicy& policy) {
  A3Monitor monitor(policy);
  for (const MeasurementReport& r : reports) {
    if (auto trigger = monitor.observe(r)) return trigger;
  }
  return std::nullopt;
}

bool permits_small_cell(const UeState& ue, const HandoverPolicy& policy) {
  if (policy.scheme == HandoverScheme::kTraditional) return true;
  switch (ue.speed_class) {
    case SpeedClass::kHigh: return false;
    case SpeedClass::kMedium: return ue.service == ServiceType::kRealTime;
    case SpeedClass::kLow: return true;
  }
  return true;
}

Decision decide(const HandoverTrigger& /*trigger*/, const UeState& ue,
                const Rrh& target, const HandoverPolicy& policy) {
  if (target.kind == RrhKind::kMacro) return Decision::kProceed;
  return permits_small_cell(ue, policy) ? Decision::kProceed : Decision::kSuppress;
}

const char* to_string(Hop hop) {
  switch (hop) {
    case Hop::kAir: return "air";
    case Hop::kIntraPool: return "intra_pool";
    case Hop::kInterPoolX2: return "inter_pool_x2";
    case Hop::kCore: return "core";
  }
  return "?";
}

const char* to_string(MessageName name) {
  switch (name) {
    case MessageName::kMeasurementReport: return "MeasurementReport";
    case MessageName::kHandoverDecision: return "HandoverDecision";
    case MessageName::kHandoverRequest: return "HandoverRequest";
    case MessageName::kAdmissionControl: return "AdmissionControl";
    case MessageName::kHandoverRequestAck: return "HandoverRequestAck";
    case MessageName::kRrcReconfiguration: return "RrcReconfiguration";
    case MessageName::kHandoverCompletion: return "HandoverCompletion";
    case MessageName::kPathSwitch: return "PathSwitch";
    case MessageName::kUeContextRelease: return "UeContextRelease";
  }
  return "?";
}

double CostTable::of(Hop hop) const {
  switch (hop) {
    case Hop::kAir: return air;
    case Hop::kIntraPool: return intra_pool;
    case Hop::kInterPoolX2: return inter_pool_x2;
    case Hop::kCore: return core;
  }
  return 0.0;
}

std::vector<SignalingMessage> signaling_flow(RrhId source, RrhId target,
                                             const NetworkLayout& layout,
                                             const CostTable& costs) {
  if (source == target) throw DomainError("handover source equals target");
  const bool inter = !same_pool(layout, source, target);
  const Hop x2 = inter ? Hop::kInterPoolX2 : Hop::kIntraPool;
  std::vector<std::pair<MessageName, Hop>> flow = {
      {MessageName::kMeasurementReport, Hop::kAir},
      {MessageName::kHandoverDecision, Hop::kIntraPool},
      {MessageName::kHandoverRequest, x2},
      {MessageName::kAdmissionControl, Hop::kIntraPool},
      {MessageName::kHandoverRequestAck, x2},
      {MessageName::kRrcReconfiguration, Hop::kAir},
      {MessageName::kHandoverCompletion, Hop::kAir},
  };
  if (inter) {
    flow.push_back({MessageName::kPathSwitch, Hop::kCore});
    flow.push_back({MessageName::kUeContextRelease, Hop::kInterPoolX2});
  }
  std::vector<SignalingMessage> out;
  out.reserve(flow.size());
  for (const auto& [name, hop] : flow) out.push_back({name, hop, costs.of(hop)});
  return out;
}

std::vector<SignalingMessage> suppressed_flow(const CostTable& costs) {
  return {{MessageName::kMeasurementReport, Hop::kAir, costs.air},
          {MessageName::kHandoverDecision, Hop::kIntraPool, costs.intra_pool}};
}

std::optional<RlfEvent> RlfMonitor::observe(const LinkSample& sample) {
  check_order(last_t_, sample.t, "link samples");
  if (!failure_) {
    if (sample.sinr_db >= timers_.qout_db) {
      below_ = false;
      return std::nullopt;
    }
    if (!below_) {
      below_ = true;
      below_since_ = sample.t;
    }
    if (sample.t - below_since_ < timers_.t_rlf_s - kTimeEps) return std::nullopt;
    RlfEvent ev;
    ev.ue = ue_;
    ev.t = sample.t;
    ev.rrh_at_failure = sample.serving;
    failure_ = ev;
    below_ = false;
  }
  if (sample.t - failure_->t > timers_.t_reconnect_s + kTimeEps) {
    return flush();
  }
  if (sample.best_sinr_db >= timers_.qin_db) {
    RlfEvent ev = *failure_;
    ev.reconnect_rrh = sample.best_rrh;
    ev.reconnect_t = sample.t;
    failure_.reset();
    return ev;
  }
  return std::nullopt;
}

std::optional<RlfEvent> RlfMonitor::flush() {
  if (!failure_) return std::nullopt;
  RlfEvent ev = *failure_;
  ev.reconnect_rrh = kNoRrh;
  ev.reconnect_t = ev.t + timers_.t_reconnect_s;
  failure_.reset();
  return ev;
}

void RlfMonitor::reset() {
  below_ = false;
  failure_.reset();
}

std::optional<RlfEvent> detect_rlf(std::span<const LinkSample> stream,
                                   const RlfTimers& timers, UeId ue) {
  RlfMonitor monitor(ue, timers);
  for (const LinkSample& s : stream) {
    if (auto ev = monitor.observe(s)) return ev;
  }
  return monitor.flush();
}

const char* to_string(HandoverLabel label) {
  switch (label) {
    case HandoverLabel::kNormal: return "normal";
    case HandoverLabel::kPingPong: return "ping_pong";
    case HandoverLabel::kContinue: return "continue_ho";
    case HandoverLabel::kLate: return "late_ho";
    case HandoverLabel::kEarly: return "early_ho";
    case HandoverLabel::kWrong: return "wrong_ho";
    case HandoverLabel::kCallDrop: return "call_drop";
  }
  return "?";
}

double HandoverRecord::overhead() const {
  double sum = 0.0;
  for (const SignalingMessage& m : messages) sum += m.cost;
  return sum;
}

std::vector<HandoverRecord> classify_handover(
    std::span<const HandoverRecord> handovers, std::span<const RlfEvent> rlfs,
    double t_crit_s) {
  if (!(t_crit_s > 0.0)) throw DomainError("t_crit must be positive");

  std::vector<HandoverRecord> out;
  std::vector<const HandoverRecord*> completed;
  std::optional<UeId> ue;
  const auto same_ue = [&](UeId id) {
    if (ue && *ue != id) throw SequencingError("history mixes several UEs");
    ue = id;
  };
  std::optional<double> last;
  for (const HandoverRecord& h : handovers) {
    same_ue(h.ue);
    if (h.suppressed) {
      out.push_back(h);
      continue;
    }
    if (h.failure) throw SequencingError("history already holds failure records");
    check_order(last, h.t_complete, "handover records");
    completed.push_back(&h);
  }
  last.reset();
  for (const RlfEvent& e : rlfs) {
    same_ue(e.ue);
    check_order(last, e.t, "RLF events");
  }

  // Merge by time; a handover completing at the same instant as an RLF is
  // processed first.
  std::size_t hi = 0, ri = 0;
  std::optional<std::size_t> pending;  // index into out, timer running
  RrhId serving = kNoRrh;
  while (hi < completed.size() || ri < rlfs.size()) {
    const bool take_ho =
        ri == rlfs.size() ||
        (hi < completed.size() && completed[hi]->t_complete <= rlfs[ri].t);
    if (take_ho) {
      const HandoverRecord& h = *completed[hi++];
      if (serving != kNoRrh && h.source != serving) {
        throw SequencingError("handover from RRH " + std::to_string(h.source) +
                              " while the UE is served by " +
                              std::to_string(serving));
      }
      if (pending && h.t_complete <= out[*pending].t_complete + t_crit_s + kTimeEps) {
        HandoverRecord& p = out[*pending];
        p.label = h.target == p.source ? HandoverLabel::kPingPong
                                       : HandoverLabel::kContinue;
      }
      out.push_back(h);
      out.back().label = HandoverLabel::kNormal;
      pending = out.size() - 1;
      serving = h.target;
      continue;
    }

    const RlfEvent& e = rlfs[ri++];
    if (pending && e.t <= out[*pending].t_complete + t_crit_s + kTimeEps) {
      HandoverRecord& p = out[*pending];
      if (!e.reconnected()) {
        p.label = HandoverLabel::kCallDrop;
      } else if (e.reconnect_rrh == p.source) {
        p.label = HandoverLabel::kEarly;
      } else if (e.reconnect_rrh != p.target) {
        p.label = HandoverLabel::kWrong;
      }
    } else if (!e.reconnected() || e.reconnect_rrh != e.rrh_at_failure) {
      HandoverRecord f;
      f.ue = e.ue;
      f.t_complete = e.reconnected() ? e.reconnect_t : e.t;
      f.source = e.rrh_at_failure;
      f.target = e.reconnect_rrh;
      f.failure = true;
      f.label = e.reconnected() ? HandoverLabel::kLate : HandoverLabel::kCallDrop;
      out.push_back(f);
    }
    pending.reset();
    serving = e.reconnect_rrh;
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const HandoverRecord& a, const HandoverRecord& b) {
                     return a.t_complete < b.t_complete;
                   });
  return out;
}

std::vector<HandoverRecord> classify_all(std::span<const HandoverRecord> handovers,
                                         std::span<const RlfEvent> rlfs,
                                         double t_crit_s) {
  std::map<UeId, std::pair<std::vector<HandoverRecord>, std::vector<RlfEvent>>> per_ue;
  for (const HandoverRecord& h : handovers) per_ue[h.ue].first.push_back(h);
  for (const RlfEvent& e : rlfs) per_ue[e.ue].second.push_back(e);
  std::vector<HandoverRecord> out;
  for (auto& [ue, history] : per_ue) {
    auto labelled = classify_handover(history.first, history.second, t_crit_s);
    out.insert(out.end(), labelled.begin(), labelled.end());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const HandoverRecord& a, const HandoverRecord& b) {
                     if (a.t_complete != b.t_complete) return a.t_complete < b.t_complete;
                     return a.ue < b.ue;
                   });
  return out;
}

double overhead_of(std::span<const HandoverRecord> records,
                   bool count_suppressed_reports) {
  double total = 0.0;
  for (const HandoverRecord& r : records) {
    if (r.suppressed && !count_suppressed_reports) continue;
    total += r.overhead();
  }
  return total;
}

std::string handover_log_csv(std::span<const HandoverRecord> records) {
  std::ostringstream os;
  os << "t_s,ue_id,source,target,inter_pool,label,overhead\n";
  for (const HandoverRecord& r : records) {
    os << fmt_double(r.t_complete) << ',' << r.ue << ',' << r.source << ',';
    if (r.target != kNoRrh) os << r.target;
    os << ',' << (r.inter_pool ? 1 : 0) << ','
       << (r.suppressed ? "suppressed" : to_string(r.label)) << ','
       << fmt_double(r.overhead()) << '\n';
  }
  return os.str();
}

}  // namespace hcsnet
