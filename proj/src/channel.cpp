#include "hcsnet/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "csv_format.hpp"
#include "hcsnet/error.hpp"

namespace hcsnet {

namespace {

void check_index(std::span<const double> rsrp_dbm, RrhId id) {
  if (id >= rsrp_dbm.size()) {
    throw LookupError("RRH " + std::to_string(id) + " not among the links");
  }
}

}  // namespace

void validate(const ChannelModel& model) {
  if (!(model.macro_pl.slope_db > 0.0)) {
    throw ConfigError("channel.macro_pl.slope_db", "slope must be positive");
  }
  if (!(model.small_pl.slope_db > 0.0)) {
    throw ConfigError("channel.small_pl.slope_db", "slope must be positive");
  }
  if (!(model.shadowing_sigma_macro_db >= 0.0)) {
    throw ConfigError("channel.shadowing_sigma_macro_db", "must be non-negative");
  }
  if (!(model.shadowing_sigma_small_db >= 0.0)) {
    throw ConfigError("channel.shadowing_sigma_small_db", "must be non-negative");
  }
  if (!(model.min_distance_m > 0.0)) {
    throw ConfigError("channel.min_distance_m", "must be positive");
  }
  if (!std::isfinite(model.noise_dbm)) {
    throw ConfigError("channel.noise_dbm", "must be finite");
  }
}

double path_loss(const ChannelModel& model, RrhKind kind, double distance_m) {
  if (!std::isfinite(distance_m) || distance_m < 0.0) {
    throw DomainError("path loss distance must be finite and non-negative");
  }
  const double d = std::max(distance_m, model.min_distance_m);
  const PathLossLaw& law = model.law(kind);
  return law.intercept_db + law.slope_db * std::log10(d / 1000.0);
}

double rsrp(const ChannelModel& model, const Rrh& rrh, const Point2& ue,
            double shadow_db) {
  return rrh.tx_power_dbm -
         path_loss(model, rrh.kind, distance(rrh.position, ue)) + shadow_db;
}

double shadowing_db(const ChannelModel& model, const Rrh& rrh,
                    std::uint64_t seed, Stream stream, std::uint64_t key) {
  const double sigma = model.shadowing_sigma_db(rrh.kind);
  if (sigma == 0.0) return 0.0;
  return sigma * keyed_normal(seed, stream, {rrh.id, key});
}

std::vector<double> rsrp_all(const ChannelModel& model,
                             const NetworkLayout& layout, const Point2& at) {
  std::vector<double> out(layout.size());
  for (const Rrh& r : layout.rrhs) out[r.id] = rsrp(model, r, at, 0.0);
  return out;
}

std::vector<double> rsrp_all(const ChannelModel& model,
                             const NetworkLayout& layout, const Point2& at,
                             std::uint64_t seed, Stream stream,
                             std::uint64_t key) {
  std::vector<double> out(layout.size());
  for (const Rrh& r : layout.rrhs) {
    out[r.id] = rsrp(model, r, at, shadowing_db(model, r, seed, stream, key));
  }
  return out;
}

RrhId strongest(std::span<const double> rsrp_dbm) {
  if (rsrp_dbm.empty()) throw DomainError("empty link set");
  const auto it = std::max_element(rsrp_dbm.begin(), rsrp_dbm.end());
  return static_cast<RrhId>(it - rsrp_dbm.begin());
}

PowerSplit power_split(std::span<const double> rsrp_dbm,
                       std::span<const RrhId> cluster) {
  std::vector<char> in_cluster(rsrp_dbm.size(), 0);
  for (RrhId id : cluster) {
    check_index(rsrp_dbm, id);
    in_cluster[id] = 1;
  }
  PowerSplit split;
  for (std::size_t k = 0; k < rsrp_dbm.size(); ++k) {
    const double p = dbm_to_mw(rsrp_dbm[k]);
    (in_cluster[k] ? split.signal_mw : split.interference_mw) += p;
  }
  return split;
}

double sinr_noncomp(std::span<const double> rsrp_dbm, RrhId serving,
                    double noise_dbm) {
  if (rsrp_dbm.empty()) throw DomainError("empty link set");
  const RrhId cluster[] = {serving};
  return sinr_joint(rsrp_dbm, cluster, noise_dbm);
}

double sinr_joint(std::span<const double> rsrp_dbm,
                  std::span<const RrhId> cluster, double noise_dbm) {
  if (cluster.empty()) throw DomainError("joint transmission cluster is empty");
  if (rsrp_dbm.empty()) throw DomainError("empty link set");
  const PowerSplit split = power_split(rsrp_dbm, cluster);
  return split.signal_mw / (split.interference_mw + dbm_to_mw(noise_dbm));
}

double pcg(std::span<const double> rsrp_dbm, RrhId serving, RrhId candidate,
           double noise_dbm) {
  if (serving == candidate) {
    throw DomainError("pcg needs two distinct RRHs");
  }
  const RrhId pair[] = {serving, candidate};
  return sinr_joint(rsrp_dbm, pair, noise_dbm) /
         sinr_noncomp(rsrp_dbm, serving, noise_dbm);
}

LinkBudget link_budget(const ChannelModel& model, const NetworkLayout& layout,
                       UeId ue, const Point2& position, std::uint64_t seed) {
  LinkBudget lb;
  lb.ue = ue;
  lb.rsrp_dbm = rsrp_all(model, layout, position, seed, Stream::kShadowing, ue);
  lb.serving = strongest(lb.rsrp_dbm);
  lb.sinr_noncomp = sinr_noncomp(lb.rsrp_dbm, lb.serving, model.noise_dbm);
  return lb;
}

std::string links_csv(std::span<const LinkBudget> links) {
  std::ostringstream os;
  os << "ue_id,rrh_id,rsrp_dbm,serving\n";
  for (const LinkBudget& lb : links) {
    for (std::size_t k = 0; k < lb.rsrp_dbm.size(); ++k) {
      os << lb.ue << ',' << k << ',' << fmt_double(lb.rsrp_dbm[k]) << ','
         << (k == lb.serving ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

}  // namespace hcsnet
