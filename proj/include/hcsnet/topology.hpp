#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcsnet/units.hpp"

namespace hcsnet {

enum class RrhKind { kMacro, kSmall };

const char* to_string(RrhKind kind);

struct Rrh {
  RrhId id = 0;
  RrhKind kind = RrhKind::kMacro;
  Point2 position;
  double tx_power_dbm = 0.0;
  std::uint32_t bbu_pool = 0;

  friend bool operator==(const Rrh&, const Rrh&) = default;
};

struct BbuPool {
  std::uint32_t id = 0;
  std::vector<RrhId> member_rrhs;  // ascending

  friend bool operator==(const BbuPool&, const BbuPool&) = default;
};

struct Region {
  double width_m = 0.0;
  double height_m = 0.0;

  bool contains(const Point2& p) const {
    return p.x >= 0.0 && p.x <= width_m && p.y >= 0.0 && p.y <= height_m;
  }
  Point2 center() const { return {0.5 * width_m, 0.5 * height_m}; }

  friend bool operator==(const Region&, const Region&) = default;
};

struct LayoutConfig {
  Region region{1500.0, 1500.0};
  std::uint32_t mrrh_count = 7;
  double mrrh_isd_m = 500.0;
  std::uint32_t srrh_count = 20;
  double srrh_min_mrrh_distance_m = 40.0;
  double mrrh_tx_dbm = 46.0;
  double srrh_tx_dbm = 30.0;
  // Pools tile the region into pool_cols x pool_rows equal rectangles.
  std::uint32_t pool_cols = 1;
  std::uint32_t pool_rows = 1;

  friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

// Immutable after generation. RRH ids are dense: macros first, then smalls.
struct NetworkLayout {
  std::vector<Rrh> rrhs;
  std::vector<BbuPool> pools;
  Region region;
  std::uint64_t seed = 0;

  std::size_t size() const { return rrhs.size(); }
  const Rrh& at(RrhId id) const;

  friend bool operator==(const NetworkLayout&, const NetworkLayout&) = default;
};

// MRRHs on a square grid centred in the region, SRRHs uniform with a
// keep-out radius around every MRRH, pools by spatial tiling.
NetworkLayout generate_layout(const LayoutConfig& config, std::uint64_t seed);

std::vector<RrhId> neighbors_within(const NetworkLayout& layout, RrhId rrh,
                                    double radius_m);

bool same_pool(const NetworkLayout& layout, RrhId a, RrhId b);

std::uint32_t pool_for(const LayoutConfig& config, const Point2& p);

// rrh_id,kind,x_m,y_m,tx_power_dbm,pool_id
std::string layout_csv(const NetworkLayout& layout);

}  // namespace hcsnet
