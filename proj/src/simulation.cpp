#include "hcsnet/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <optional>
#include <sstream>

#include "csv_format.hpp"
#include "hcsnet/channel.hpp"
#include "hcsnet/clustering.hpp"
#include "hcsnet/error.hpp"
#include "hcsnet/mobility.hpp"
#include "hcsnet/random.hpp"

namespace hcsnet {
namespace {

std::string at_time(double t) {
  std::ostringstream os;
  os << "at t=" << t << " s: ";
  return os.str();
}

// Rethrows the in-flight library error with the simulation time prepended,
// keeping its type.
[[noreturn]] void rethrow_at(double t) {
  const std::string prefix = at_time(t);
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(e.key_path(), prefix + e.what());
  } catch (const LookupError& e) {
    throw LookupError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(prefix + e.what());
  } catch (const SequencingError& e) {
    throw SequencingError(prefix + e.what());
  } catch (const IncompleteInputError& e) {
    throw IncompleteInputError(prefix + e.what());
  } catch (const SizeGuardError& e) {
    throw SizeGuardError(prefix + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

// ---------------------------------------------------------------------------
// Snapshot CoMP evaluation

struct SchemeClusters {
  std::vector<std::vector<RrhId>> cluster_for;  // by serving RRH
  std::vector<ClusterRow> rows;
  std::size_t iterations = 0;
};

SchemeClusters from_groups(ClusteringScheme scheme,
                           const std::vector<ClusterAssignment>& groups,
                           std::size_t n) {
  SchemeClusters out;
  out.cluster_for.resize(n);
  for (const ClusterAssignment& g : groups) {
    for (const auto& cluster : g.clusters) {
      for (RrhId id : cluster) out.cluster_for[id] = cluster;
      ClusterRow row;
      row.scheme = to_string(scheme);
      row.anchor = cluster.front();
      row.members = cluster;
      row.exemplar = g.exemplar_for(cluster.front());
      row.iterations = g.iterations_used;
      row.converged = g.converged;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

SchemeClusters cluster_once(ClusteringScheme scheme, const ScenarioConfig& config,
                            const NetworkLayout& layout, std::uint64_t seed) {
  const std::size_t n = layout.size();
  switch (scheme) {
    case ClusteringScheme::kStatic:
      return from_groups(scheme,
                         static_cluster(layout, config.clustering.static_cluster_size), n);
    case ClusteringScheme::kSim:
      return from_groups(
          scheme,
          sim_interference_cluster(layout, config.channel,
                                   config.clustering.sim_cluster_size),
          n);
    case ClusteringScheme::kApbc: {
      SchemeClusters out;
      out.cluster_for.resize(n);
      const ApbcOptions options = config.clustering.apbc_options();
      for (RrhId anchor = 0; anchor < n; ++anchor) {
        const ApbcResult r = apbc_cluster(layout, config.channel, anchor, options, seed);
        out.cluster_for[anchor] = r.coordinated.cluster_of(anchor);
        out.iterations += r.coordinated.iterations_used;
        ClusterRow row;
        row.scheme = to_string(scheme);
        row.anchor = anchor;
        row.members = out.cluster_for[anchor];
        row.exemplar = r.coordinated.exemplar_for(anchor);
        row.iterations = r.coordinated.iterations_used;
        row.converged = r.coordinated.converged;
        out.rows.push_back(std::move(row));
      }
      return out;
    }
    case ClusteringScheme::kNone:
      break;
  }
  SchemeClusters none;
  none.cluster_for.resize(n);
  for (RrhId id = 0; id < n; ++id) none.cluster_for[id] = {id};
  return none;
}

// Bottom edge_fraction of UEs by non-CoMP SINR, ties broken by UE id.
std::vector<std::size_t> edge_ues(const std::vector<LinkBudget>& links,
                                  double edge_fraction) {
  std::vector<std::size_t> order(links.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (links[a].sinr_noncomp != links[b].sinr_noncomp) {
      return links[a].sinr_noncomp < links[b].sinr_noncomp;
    }
    return links[a].ue < links[b].ue;
  });
  const auto want = static_cast<std::size_t>(
      std::ceil(edge_fraction * static_cast<double>(links.size())));
  order.resize(std::clamp<std::size_t>(want, 1, links.size()));
  return order;
}

void evaluate_snapshot(const ScenarioConfig& config, const std::vector<UeState>& population,
                       ScenarioResult& result) {
  const NetworkLayout& layout = result.layout;
  const std::uint64_t seed = config.sim.seed;
  std::vector<LinkBudget> links;
  links.reserve(population.size());
  for (const UeState& ue : population) {
    links.push_back(link_budget(config.channel, layout, ue.id, ue.position, seed));
  }
  const std::vector<std::size_t> edge = edge_ues(links, config.clustering.edge_fraction);
  result.links = links;
  const double trigger = db_to_linear(config.clustering.trigger_threshold_db);

  for (ClusteringScheme scheme : config.clustering.schemes()) {
    SampleSet samples;
    samples.label = to_string(scheme);
    samples.values.reserve(edge.size());
    if (scheme == ClusteringScheme::kNone) {
      for (std::size_t i : edge) {
        samples.values.push_back(spectral_efficiency(links[i].sinr_noncomp));
      }
      result.edge_se.push_back(std::move(samples));
      continue;
    }

    // Only the clustering call is timed; the channel above is shared.
    std::vector<double> wall;
    SchemeClusters clusters;
    const std::size_t reps = std::max<std::size_t>(1, config.clustering.timing_repetitions);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      clusters = cluster_once(scheme, config, layout, seed);
      const auto stop = std::chrono::steady_clock::now();
      wall.push_back(std::chrono::duration<double>(stop - start).count());
    }
    result.timings.push_back(
        {to_string(scheme), layout.size(), median(wall), clusters.iterations});

    for (std::size_t i : edge) {
      const LinkBudget& link = links[i];
      double sinr = link.sinr_noncomp;
      if (comp_trigger(link.sinr_noncomp, trigger)) {
        sinr = sinr_joint(link.rsrp_dbm, clusters.cluster_for[link.serving],
                          config.channel.noise_dbm);
      }
      samples.values.push_back(spectral_efficiency(sinr));
    }
    result.edge_se.push_back(std::move(samples));
    result.clusters.insert(result.clusters.end(), clusters.rows.begin(),
                           clusters.rows.end());
  }
}

// ---------------------------------------------------------------------------
// Mobility and handover loop

struct UeRadio {
  A3Monitor a3;
  RlfMonitor rlf;
  std::uint64_t period = 0;  // on/off period counter for draw_period
  std::vector<HandoverRecord> handovers;
  std::vector<RlfEvent> rlfs;
};

class MobilityRun {
 public:
  MobilityRun(const ScenarioConfig& config, const NetworkLayout& layout,
              std::vector<UeState> population, bool record_trace)
      : config_(config),
        layout_(layout),
        ues_(std::move(population)),
        record_trace_(record_trace) {
    const std::size_t n = layout_.size();
    shadow_.resize(ues_.size() * n);
    for (const UeState& ue : ues_) {
      for (const Rrh& rrh : layout_.rrhs) {
        shadow_[ue.id * n + rrh.id] =
            shadowing_db(config_.channel, rrh, config_.sim.seed, Stream::kShadowing, ue.id);
      }
      radios_.push_back({A3Monitor(config_.handover.policy),
                         RlfMonitor(ue.id, config_.handover.rlf), 0, {}, {}});
    }
    rsrp_.resize(n);
  }

  void run(ScenarioResult& result) {
    const double dt = config_.sim.step_s;
    const auto steps =
        static_cast<std::uint64_t>(std::llround(config_.sim.duration_s / dt));
    double t = 0.0;
    try {
      for (UeState& ue : ues_) {
        if (ue.in_session) attach(ue, t);
      }
      record(t);
      for (std::uint64_t k = 1; k <= steps; ++k) {
        t = static_cast<double>(k) * dt;
        for (UeState& ue : ues_) step(ue, t, dt);
        record(t);
      }
      for (UeState& ue : ues_) {
        if (ue.in_session) close_session(ue);
      }
    } catch (const Error&) {
      rethrow_at(t);
    }
    std::stable_sort(log_.begin(), log_.end(),
                     [](const HandoverRecord& a, const HandoverRecord& b) {
                       if (a.t_complete != b.t_complete) return a.t_complete < b.t_complete;
                       return a.ue < b.ue;
                     });
    result.handover_log = std::move(log_);
    result.rlf_events = std::move(rlf_log_);
    result.trace = std::move(trace_);
  }

 private:
  void record(double t) {
    if (!record_trace_) return;
    for (const UeState& ue : ues_) {
      trace_.push_back({t, ue.id, ue.position, ue.speed_class, ue.serving_rrh});
    }
  }

  bool admissible(const UeState& ue, const Rrh& rrh) const {
    return rrh.kind == RrhKind::kMacro ||
           permits_small_cell(ue, config_.handover.policy);
  }

  void measure(const UeState& ue) {
    const std::size_t n = layout_.size();
    for (const Rrh& rrh : layout_.rrhs) {
      rsrp_[rrh.id] = rsrp(config_.channel, rrh, ue.position, shadow_[ue.id * n + rrh.id]);
    }
  }

  // Strongest RRH the UE may camp on; the policy also governs attachment.
  RrhId best_admissible(const UeState& ue) const {
    RrhId best = kNoRrh;
    for (const Rrh& rrh : layout_.rrhs) {
      if (!admissible(ue, rrh)) continue;
      if (best == kNoRrh || rsrp_[rrh.id] > rsrp_[best]) best = rrh.id;
    }
    // A network without any admissible site still has to carry the call.
    return best == kNoRrh ? strongest(rsrp_) : best;
  }

  double sinr_db(RrhId serving) const {
    return linear_to_db(sinr_noncomp(rsrp_, serving, config_.channel.noise_dbm));
  }

  void attach(UeState& ue, double /*t*/) {
    measure(ue);
    ue.serving_rrh = best_admissible(ue);
    UeRadio& radio = radios_[ue.id];
    radio.a3.reset();
    radio.rlf.reset();
  }

  void close_session(UeState& ue) {
    UeRadio& radio = radios_[ue.id];
    auto labelled = classify_handover(radio.handovers, radio.rlfs, config_.handover.t_crit_s);
    log_.insert(log_.end(), labelled.begin(), labelled.end());
    rlf_log_.insert(rlf_log_.end(), radio.rlfs.begin(), radio.rlfs.end());
    radio.handovers.clear();
    radio.rlfs.clear();
    radio.a3.reset();
    radio.rlf.reset();
    ue.serving_rrh = kNoRrh;
  }

  void next_period(UeState& ue) {
    UeRadio& radio = radios_[ue.id];
    const MobilityConfig& m = config_.mobility;
    ue.in_session = !ue.in_session;
    ue.session_remaining_s += draw_period(ue.in_session ? m.mean_session_s : m.mean_idle_s,
                                          config_.sim.seed, ue.id, ++radio.period);
  }

  void step(UeState& ue, double t, double dt) {
    ue = config_.mobility.model == MobilityModel::kRandomWaypoint
             ? advance_waypoint(ue, dt, layout_.region, config_.sim.seed)
             : advance(ue, dt, layout_.region);

    if (!ue.in_session) {
      if (ue.session_remaining_s > 0.0) return;
      next_period(ue);
      attach(ue, t);
      return;
    }
    if (ue.session_remaining_s <= 0.0) {
      close_session(ue);
      next_period(ue);
      return;
    }

    UeRadio& radio = radios_[ue.id];
    measure(ue);
    const RrhId best = best_admissible(ue);
    LinkSample sample;
    sample.t = t;
    sample.serving = ue.serving_rrh;
    sample.sinr_db = sinr_db(ue.serving_rrh);
    sample.best_rrh = best;
    sample.best_sinr_db = sinr_db(best);
    if (auto event = radio.rlf.observe(sample)) {
      radio.rlfs.push_back(*event);
      if (event->reconnected()) {
        ue.serving_rrh = event->reconnect_rrh;
        radio.a3.reset();
      } else {
        // The call is lost; the UE idles until its next session.
        close_session(ue);
        ue.in_session = false;
        ue.session_remaining_s = draw_period(config_.mobility.mean_idle_s,
                                             config_.sim.seed, ue.id, ++radio.period);
        return;
      }
    }
    if (radio.rlf.failed()) return;

    MeasurementReport report;
    report.ue = ue.id;
    report.t = t;
    report.serving = ue.serving_rrh;
    report.serving_rsrp_dbm = rsrp_[ue.serving_rrh];
    report.best_neighbor = kNoRrh;
    for (const Rrh& rrh : layout_.rrhs) {
      if (rrh.id == ue.serving_rrh) continue;
      if (report.best_neighbor == kNoRrh || rsrp_[rrh.id] > rsrp_[report.best_neighbor]) {
        report.best_neighbor = rrh.id;
      }
    }
    if (report.best_neighbor == kNoRrh) return;  // single-RRH network
    report.neighbor_rsrp_dbm = rsrp_[report.best_neighbor];

    const auto trigger = radio.a3.observe(report);
    if (!trigger) return;
    const Rrh& target = layout_.at(trigger->target);
    HandoverRecord record;
    record.ue = ue.id;
    record.t_complete = t;
    record.source = trigger->source;
    record.target = trigger->target;
    record.target_kind = target.kind;
    record.inter_pool = !same_pool(layout_, trigger->source, trigger->target);
    if (decide(*trigger, ue, target, config_.handover.policy) == Decision::kSuppress) {
      record.suppressed = true;
      record.messages = suppressed_flow(config_.handover.costs);
      radio.handovers.push_back(std::move(record));
      return;
    }
    record.messages = signaling_flow(trigger->source, trigger->target, layout_,
                                     config_.handover.costs);
    radio.handovers.push_back(std::move(record));
    ue.serving_rrh = trigger->target;
    radio.a3.reset();
  }

  const ScenarioConfig& config_;
  const NetworkLayout& layout_;
  std::vector<UeState> ues_;
  std::vector<UeRadio> radios_;
  std::vector<double> shadow_;  // ue-major, fixed per (UE, RRH)
  std::vector<double> rsrp_;    // scratch for the UE being stepped
  std::vector<HandoverRecord> log_;
  std::vector<RlfEvent> rlf_log_;
  bool record_trace_ = false;
  std::vector<TraceRow> trace_;
};

OverheadSummary summarize(const ScenarioConfig& config, const ScenarioResult& result) {
  OverheadSummary s;
  s.scheme = to_string(config.handover.policy.scheme);
  s.rlf_events = result.rlf_events.size();
  for (const HandoverRecord& r : result.handover_log) {
    if (r.suppressed) {
      ++s.suppressed;
      continue;
    }
    if (!r.failure) ++s.handovers;
    ++s.label_counts[static_cast<std::size_t>(r.label)];
  }
  const bool count_suppressed = config.handover.count_suppressed_reports;
  s.overhead = overhead_of(result.handover_log, count_suppressed);
  for (const HandoverRecord& r : result.handover_log) {
    if (r.failure || r.target_kind != RrhKind::kSmall) continue;
    if (r.suppressed && !count_suppressed) continue;
    s.overhead_to_srrh += r.overhead();
  }
  return s;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  validate(config);
  ScenarioResult result;
  result.layout = generate_layout(config.layout, config.sim.seed);
  std::vector<UeState> population = sample_population(
      config.mobility, config.sim.ue_count, config.sim.seed, result.layout.region);
  evaluate_snapshot(config, population, result);
  MobilityRun(config, result.layout, std::move(population), options.record_trace)
      .run(result);
  result.overhead = summarize(config, result);
  return result;
}

std::vector<std::pair<std::string, double>> scalar_metrics(const ScenarioResult& result) {
  std::vector<std::pair<std::string, double>> out;
  const OverheadSummary& o = result.overhead;
  out.emplace_back("overhead", o.overhead);
  out.emplace_back("overhead_to_srrh", o.overhead_to_srrh);
  out.emplace_back("handovers", static_cast<double>(o.handovers));
  out.emplace_back("suppressed", static_cast<double>(o.suppressed));
  out.emplace_back("rlf_events", static_cast<double>(o.rlf_events));
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    out.emplace_back(to_string(static_cast<HandoverLabel>(i)),
                     static_cast<double>(o.label_counts[i]));
  }
  for (const SampleSet& s : result.edge_se) {
    out.emplace_back("edge_median_se_" + s.label, median(s.values));
  }
  return out;
}

std::string trace_csv(std::span<const TraceRow> rows) {
  std::ostringstream os;
  os << "t_s,ue_id,x_m,y_m,speed_class,serving_rrh\n";
  for (const TraceRow& r : rows) {
    os << fmt_double(r.t) << ',' << r.ue << ',' << fmt_double(r.position.x) << ','
       << fmt_double(r.position.y) << ',' << to_string(r.speed_class) << ',';
    if (r.serving != kNoRrh) os << r.serving;
    os << '\n';
  }
  return os.str();
}

const SweepStat& SweepPoint::stat(const std::string& metric) const {
  for (const SweepStat& s : stats) {
    if (s.metric == metric) return s;
  }
  throw LookupError("sweep point has no metric '" + metric + "'");
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::size_t replication) {
  if (replication == 0) return base_seed;
  return mix_keys({base_seed, static_cast<std::uint64_t>(Stream::kReplication),
                   static_cast<std::uint64_t>(replication)});
}

SweepTable run_sweep(const nlohmann::json& config_doc, const SweepSpec& sweep) {
  if (sweep.replications < 1) {
    throw ConfigError("sweep.replications", "must be at least 1");
  }
  if (sweep.values.empty()) throw ConfigError("sweep.values", "must not be empty");

  SweepTable table;
  table.parameter = sweep.parameter;
  // Sweep over the complete document so defaulted keys are addressable too.
  const ScenarioConfig base = config_from_json(config_doc);
  const nlohmann::json full = to_json(base);
  table.handover_scheme = to_string(base.handover.policy.scheme);

  for (const nlohmann::json& value : sweep.values) {
    const ScenarioConfig point = config_from_json(with_value(full, sweep.parameter, value));
    std::vector<std::string> names;
    std::map<std::string, std::vector<double>> samples;
    for (std::size_t r = 0; r < sweep.replications; ++r) {
      ScenarioConfig run = point;
      run.sim.seed = replication_seed(point.sim.seed, r);
      for (const auto& [name, v] : scalar_metrics(run_scenario(run))) {
        if (!samples.contains(name)) names.push_back(name);
        samples[name].push_back(v);
      }
    }
    SweepPoint p;
    p.value = value;
    p.replications = sweep.replications;
    for (const std::string& name : names) {
      const std::vector<double>& xs = samples[name];
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double sd =
          xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
      p.stats.push_back({name, mean, sd});
    }
    table.points.push_back(std::move(p));
  }
  return table;
}

}  // namespace hcsnet
