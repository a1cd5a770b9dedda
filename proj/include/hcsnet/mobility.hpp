#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcsnet/topology.hpp"
#include "hcsnet/units.hpp"

namespace hcsnet {

enum class SpeedClass { kLow, kMedium, kHigh };
enum class ServiceType { kRealTime, kNonRealTime };
enum class MobilityModel { kStraightLine, kRandomWaypoint };

const char* to_string(SpeedClass c);
const char* to_string(ServiceType s);
const char* to_string(MobilityModel m);
MobilityModel mobility_model_from_string(const std::string& name);

struct SpeedThresholds {
  double low_max_mps = 8.3;      // 30 km/h
  double medium_max_mps = 16.7;  // 60 km/h

  friend bool operator==(const SpeedThresholds&, const SpeedThresholds&) = default;
};

struct ClassSpeeds {
  double low_mps = 3.0;
  double medium_mps = 12.0;
  double high_mps = 25.0;

  double of(SpeedClass c) const {
    return c == SpeedClass::kLow ? low_mps
           : c == SpeedClass::kMedium ? medium_mps
                                      : high_mps;
  }

  friend bool operator==(const ClassSpeeds&, const ClassSpeeds&) = default;
};

struct MobilityConfig {
  double alpha = 0.1;  // fraction of high-mobility users
  ClassSpeeds speeds;
  SpeedThresholds thresholds;
  double mean_session_s = 120.0;
  // Mean gap between sessions; zero makes sessions back-to-back.
  double mean_idle_s = 120.0;
  MobilityModel model = MobilityModel::kStraightLine;

  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

void validate(const MobilityConfig& config);

struct UeState {
  UeId id = 0;
  Point2 position;
  Point2 velocity;  // m/s
  SpeedClass speed_class = SpeedClass::kLow;
  ServiceType service = ServiceType::kRealTime;
  RrhId serving_rrh = kNoRrh;  // kNoRrh while not attached
  bool in_session = false;
  double session_remaining_s = 0.0;  // time left in the current on/off period
  Point2 waypoint;                   // random-waypoint target
  std::uint32_t waypoint_count = 0;

  double speed() const { return std::hypot(velocity.x, velocity.y); }
};

// Straight-line motion with specular reflection at the region edges.
UeState advance(UeState ue, double dt_s, const Region& region);

// Random-waypoint motion; new waypoints are keyed by (seed, ue id, leg).
UeState advance_waypoint(UeState ue, double dt_s, const Region& region,
                         std::uint64_t seed);

SpeedClass classify_speed(double speed_mps, const SpeedThresholds& thresholds);

// Each user is high class with probability alpha; the rest split evenly
// between low and medium. Services split evenly. Draws are keyed per UE so
// a user's attributes do not depend on the population size.
std::vector<UeState> sample_population(const MobilityConfig& config,
                                       std::uint32_t count, std::uint64_t seed,
                                       const Region& region);

// One exponential on/off period for a UE, keyed by (seed, ue, period).
double draw_period(double mean_s, std::uint64_t seed, UeId ue,
                   std::uint64_t period);

}  // namespace hcsnet
