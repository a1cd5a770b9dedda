#include "hcsnet/mobility.hpp"

#include <cmath>
#include <numbers>

#include "hcsnet/error.hpp"
#include "hcsnet/random.hpp"

namespace hcsnet {

namespace {

// Folds a coordinate back into [0, extent]. Returns true when the number
// of wall reflections is odd, i.e. the velocity component must flip.
bool reflect(double& v, double extent) {
  if (extent <= 0.0) {
    v = 0.0;
    return false;
  }
  const double period = 2.0 * extent;
  double m = std::fmod(v, period);
  if (m < 0.0) m += period;
  const bool odd = m > extent;
  v = odd ? period - m : m;
  return odd;
}

Point2 uniform_point(KeyedEngine& rng, const Region& region) {
  const double x = rng.uniform() * region.width_m;
  return {x, rng.uniform() * region.height_m};
}

}  // namespace

const char* to_string(SpeedClass c) {
  switch (c) {
    case SpeedClass::kLow: return "low";
    case SpeedClass::kMedium: return "medium";
    case SpeedClass::kHigh: return "high";
  }
  return "?";
}

const char* to_string(ServiceType s) {
  return s == ServiceType::kRealTime ? "real_time" : "non_real_time";
}

const char* to_string(MobilityModel m) {
  return m == MobilityModel::kStraightLine ? "straight_line" : "random_waypoint";
}

MobilityModel mobility_model_from_string(const std::string& name) {
  if (name == "straight_line") return MobilityModel::kStraightLine;
  if (name == "random_waypoint") return MobilityModel::kRandomWaypoint;
  throw ConfigError("mobility.model", "unknown mobility model '" + name + "'");
}

void validate(const MobilityConfig& config) {
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
    throw ConfigError("mobility.alpha", "must lie in [0, 1]");
  }
  const ClassSpeeds& s = config.speeds;
  if (!(s.low_mps >= 0.0 && s.low_mps < s.medium_mps && s.medium_mps < s.high_mps)) {
    throw ConfigError("mobility.speeds_mps",
                      "speeds must satisfy 0 <= low < medium < high");
  }
  const SpeedThresholds& t = config.thresholds;
  if (!(t.low_max_mps >= 0.0 && t.low_max_mps < t.medium_max_mps)) {
    throw ConfigError("mobility.speed_thresholds_mps",
                      "thresholds must satisfy 0 <= low_max < medium_max");
  }
  if (classify_speed(s.low_mps, t) != SpeedClass::kLow ||
      classify_speed(s.medium_mps, t) != SpeedClass::kMedium ||
      classify_speed(s.high_mps, t) != SpeedClass::kHigh) {
    throw ConfigError("mobility.speeds_mps",
                      "class speeds disagree with the speed thresholds");
  }
  if (!(config.mean_session_s > 0.0)) {
    throw ConfigError("mobility.mean_session_s", "must be positive");
  }
  if (!(config.mean_idle_s >= 0.0)) {
    throw ConfigError("mobility.mean_idle_s", "must be non-negative");
  }
}

UeState advance(UeState ue, double dt_s, const Region& region) {
  if (!(dt_s > 0.0)) throw DomainError("time step must be positive");
  ue.position.x += ue.velocity.x * dt_s;
  ue.position.y += ue.velocity.y * dt_s;
  if (reflect(ue.position.x, region.width_m)) ue.velocity.x = -ue.velocity.x;
  if (reflect(ue.position.y, region.height_m)) ue.velocity.y = -ue.velocity.y;
  ue.session_remaining_s -= dt_s;
  return ue;
}

UeState advance_waypoint(UeState ue, double dt_s, const Region& region,
                         std::uint64_t seed) {
  if (!(dt_s > 0.0)) throw DomainError("time step must be positive");
  const double speed = ue.speed();
  double budget = speed * dt_s;
  while (speed > 0.0) {
    const double dx = ue.waypoint.x - ue.position.x;
    const double dy = ue.waypoint.y - ue.position.y;
    const double dist = std::hypot(dx, dy);
    if (dist > budget) {
      ue.position.x += dx / dist * budget;
      ue.position.y += dy / dist * budget;
      ue.velocity = {dx / dist * speed, dy / dist * speed};
      break;
    }
    ue.position = ue.waypoint;
    budget -= dist;
    auto rng = keyed_engine(seed, Stream::kWaypoint, {ue.id, ++ue.waypoint_count});
    ue.waypoint = uniform_point(rng, region);
  }
  ue.session_remaining_s -= dt_s;
  return ue;
}

SpeedClass classify_speed(double speed_mps, const SpeedThresholds& thresholds) {
  if (!(speed_mps >= 0.0)) throw DomainError("speed must be non-negative");
  if (speed_mps <= thresholds.low_max_mps) return SpeedClass::kLow;
  if (speed_mps <= thresholds.medium_max_mps) return SpeedClass::kMedium;
  return SpeedClass::kHigh;
}

double draw_period(double mean_s, std::uint64_t seed, UeId ue,
                   std::uint64_t period) {
  if (mean_s <= 0.0) return 0.0;
  auto rng = keyed_engine(seed, Stream::kSession, {ue, period});
  // Scaling a unit exponential couples draws across different means.
  return -mean_s * std::log(rng.uniform());
}

std::vector<UeState> sample_population(const MobilityConfig& config,
                                       std::uint32_t count, std::uint64_t seed,
                                       const Region& region) {
  validate(config);
  if (count < 1) throw DomainError("population needs at least one UE");
  std::vector<UeState> out;
  out.reserve(count);
  for (UeId id = 0; id < count; ++id) {
    auto rng = keyed_engine(seed, Stream::kPopulation, {id});
    // Fixed draw order: class, split, service, activity, position, heading.
    const double u_class = rng.uniform();
    const double u_split = rng.uniform();
    const double u_service = rng.uniform();
    const double u_active = rng.uniform();
    UeState ue;
    ue.id = id;
    ue.speed_class = u_class < config.alpha ? SpeedClass::kHigh
                     : u_split < 0.5        ? SpeedClass::kLow
                                            : SpeedClass::kMedium;
    ue.service = u_service < 0.5 ? ServiceType::kRealTime : ServiceType::kNonRealTime;
    ue.position = uniform_point(rng, region);
    const double heading = 2.0 * std::numbers::pi * rng.uniform();
    const double speed = config.speeds.of(ue.speed_class);
    ue.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
    ue.waypoint = uniform_point(rng, region);

    // Start in the stationary on/off distribution.
    const double p_active =
        config.mean_session_s / (config.mean_session_s + config.mean_idle_s);
    ue.in_session = u_active < p_active;
    ue.session_remaining_s = draw_period(
        ue.in_session ? config.mean_session_s : config.mean_idle_s, seed, id, 0);
    out.push_back(ue);
  }
  return out;
}

}  // namespace hcsnet
