#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcsnet/random.hpp"
#include "hcsnet/topology.hpp"
#include "hcsnet/units.hpp"

namespace hcsnet {

struct PathLossLaw {
  double intercept_db = 0.0;  // loss at 1 km
  double slope_db = 0.0;      // per decade of distance

  friend bool operator==(const PathLossLaw&, const PathLossLaw&) = default;
};

struct ChannelModel {
  PathLossLaw macro_pl{128.1, 37.6};
  PathLossLaw small_pl{140.7, 36.7};
  double shadowing_sigma_macro_db = 8.0;
  double shadowing_sigma_small_db = 10.0;
  double noise_dbm = -104.0;  // over 10 MHz
  double min_distance_m = 10.0;

  const PathLossLaw& law(RrhKind kind) const {
    return kind == RrhKind::kMacro ? macro_pl : small_pl;
  }
  double shadowing_sigma_db(RrhKind kind) const {
    return kind == RrhKind::kMacro ? shadowing_sigma_macro_db
                                   : shadowing_sigma_small_db;
  }

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

void validate(const ChannelModel& model);

double path_loss(const ChannelModel& model, RrhKind kind, double distance_m);

double rsrp(const ChannelModel& model, const Rrh& rrh, const Point2& ue,
            double shadow_db);

// Log-normal shadowing for one (RRH, receiver) pair, a pure function of
// (seed, stream, rrh id, receiver key).
double shadowing_db(const ChannelModel& model, const Rrh& rrh,
                    std::uint64_t seed, Stream stream, std::uint64_t key);

// RSRP of every RRH at a point, indexed by RRH id. Without a seed the
// values are the shadowing-free means.
std::vector<double> rsrp_all(const ChannelModel& model,
                             const NetworkLayout& layout, const Point2& at);
std::vector<double> rsrp_all(const ChannelModel& model,
                             const NetworkLayout& layout, const Point2& at,
                             std::uint64_t seed, Stream stream,
                             std::uint64_t key);

// Lowest id wins ties.
RrhId strongest(std::span<const double> rsrp_dbm);

struct PowerSplit {
  double signal_mw = 0.0;
  double interference_mw = 0.0;
};

// Partition of total received power between a transmit cluster and the rest.
PowerSplit power_split(std::span<const double> rsrp_dbm,
                       std::span<const RrhId> cluster);

double sinr_noncomp(std::span<const double> rsrp_dbm, RrhId serving,
                    double noise_dbm);

// Joint transmission: cluster members move from interference to signal.
double sinr_joint(std::span<const double> rsrp_dbm,
                  std::span<const RrhId> cluster, double noise_dbm);

// Pair CoMP SINR gain of adding `candidate` to `serving`.
double pcg(std::span<const double> rsrp_dbm, RrhId serving, RrhId candidate,
           double noise_dbm);

struct LinkBudget {
  UeId ue = 0;
  std::vector<double> rsrp_dbm;  // indexed by RRH id
  RrhId serving = 0;
  double sinr_noncomp = 0.0;     // linear
};

LinkBudget link_budget(const ChannelModel& model, const NetworkLayout& layout,
                       UeId ue, const Point2& position, std::uint64_t seed);

// ue_id,rrh_id,rsrp_dbm,serving
std::string links_csv(std::span<const LinkBudget> links);

}  // namespace hcsnet
