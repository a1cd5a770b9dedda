#include "hcsnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hcsnet/error.hpp"
#include "hcsnet/random.hpp"
#include "csv_format.hpp"

namespace hcsnet {

namespace {

constexpr int kMaxPlacementAttempts = 100000;

void validate(const LayoutConfig& config) {
  if (!(config.region.width_m > 0.0) || !(config.region.height_m > 0.0)) {
    throw ConfigError("layout.region_m", "region dimensions must be positive");
  }
  if (config.mrrh_count > 0 && !(config.mrrh_isd_m > 0.0)) {
    throw ConfigError("layout.mrrh_isd_m", "inter-site distance must be positive");
  }
  if (config.pool_cols == 0 || config.pool_rows == 0) {
    throw ConfigError("layout.pool_tiles", "pool tiling needs at least one tile");
  }
  if (config.srrh_min_mrrh_distance_m < 0.0) {
    throw ConfigError("layout.srrh_min_mrrh_distance_m", "must be non-negative");
  }
  if (config.mrrh_count + config.srrh_count == 0) {
    throw ConfigError("layout", "layout needs at least one RRH");
  }
}

}  // namespace

const char* to_string(RrhKind kind) {
  return kind == RrhKind::kMacro ? "MRRH" : "SRRH";
}

const Rrh& NetworkLayout::at(RrhId id) const {
  if (id >= rrhs.size()) {
    throw LookupError("unknown RRH id " + std::to_string(id));
  }
  return rrhs[id];
}

std::uint32_t pool_for(const LayoutConfig& config, const Point2& p) {
  const auto tile = [](double v, double extent, std::uint32_t n) {
    const auto idx = static_cast<std::int64_t>(std::floor(v / extent * n));
    return static_cast<std::uint32_t>(
        std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(n) - 1));
  };
  const std::uint32_t col = tile(p.x, config.region.width_m, config.pool_cols);
  const std::uint32_t row = tile(p.y, config.region.height_m, config.pool_rows);
  return row * config.pool_cols + col;
}

NetworkLayout generate_layout(const LayoutConfig& config, std::uint64_t seed) {
  validate(config);

  NetworkLayout layout;
  layout.region = config.region;
  layout.seed = seed;

  if (config.mrrh_count > 0) {
    const auto cols = static_cast<std::uint32_t>(
        std::ceil(std::sqrt(static_cast<double>(config.mrrh_count))));
    const std::uint32_t rows = (config.mrrh_count + cols - 1) / cols;
    const double span_x = (cols - 1) * config.mrrh_isd_m;
    const double span_y = (rows - 1) * config.mrrh_isd_m;
    if (span_x > config.region.width_m || span_y > config.region.height_m) {
      throw ConfigError("layout", "region too small for " +
                                      std::to_string(config.mrrh_count) +
                                      " MRRHs at the configured spacing");
    }
    const Point2 origin{0.5 * (config.region.width_m - span_x),
                        0.5 * (config.region.height_m - span_y)};
    for (std::uint32_t i = 0; i < config.mrrh_count; ++i) {
      Rrh r;
      r.id = static_cast<RrhId>(layout.rrhs.size());
      r.kind = RrhKind::kMacro;
      r.position = {origin.x + (i % cols) * config.mrrh_isd_m,
                    origin.y + (i / cols) * config.mrrh_isd_m};
      r.tx_power_dbm = config.mrrh_tx_dbm;
      layout.rrhs.push_back(r);
    }
  }

  auto rng = keyed_engine(seed, Stream::kLayout);
  for (std::uint32_t i = 0; i < config.srrh_count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      const double x = rng.uniform() * config.region.width_m;
      const Point2 p{x, rng.uniform() * config.region.height_m};
      const bool clear = std::none_of(
          layout.rrhs.begin(), layout.rrhs.end(), [&](const Rrh& other) {
            const double d = distance(p, other.position);
            return d == 0.0 || (other.kind == RrhKind::kMacro &&
                                d < config.srrh_min_mrrh_distance_m);
          });
      if (!clear) continue;
      Rrh r;
      r.id = static_cast<RrhId>(layout.rrhs.size());
      r.kind = RrhKind::kSmall;
      r.position = p;
      r.tx_power_dbm = config.srrh_tx_dbm;
      layout.rrhs.push_back(r);
      placed = true;
    }
    if (!placed) {
      throw ConfigError("layout", "region too small to place SRRHs outside the "
                                  "MRRH keep-out radius");
    }
  }

  std::map<std::uint32_t, BbuPool> pools;
  for (Rrh& r : layout.rrhs) {
    r.bbu_pool = pool_for(config, r.position);
    BbuPool& pool = pools[r.bbu_pool];
    pool.id = r.bbu_pool;
    pool.member_rrhs.push_back(r.id);
  }
  for (auto& [id, pool] : pools) layout.pools.push_back(std::move(pool));
  return layout;
}

std::vector<RrhId> neighbors_within(const NetworkLayout& layout, RrhId rrh,
                                    double radius_m) {
  const Rrh& center = layout.at(rrh);
  if (!(radius_m >= 0.0)) {
    throw DomainError("neighbor radius must be non-negative");
  }
  std::vector<RrhId> out;
  for (const Rrh& other : layout.rrhs) {
    if (other.id == rrh) continue;
    if (distance(center.position, other.position) <= radius_m) {
      out.push_back(other.id);
    }
  }
  return out;
}

bool same_pool(const NetworkLayout& layout, RrhId a, RrhId b) {
  return layout.at(a).bbu_pool == layout.at(b).bbu_pool;
}

std::string layout_csv(const NetworkLayout& layout) {
  std::ostringstream os;
  os << "rrh_id,kind,x_m,y_m,tx_power_dbm,pool_id\n";
  for (const Rrh& r : layout.rrhs) {
    os << r.id << ',' << to_string(r.kind) << ',' << fmt_double(r.position.x)
       << ',' << fmt_double(r.position.y) << ',' << fmt_double(r.tx_power_dbm)
       << ',' << r.bbu_pool << '\n';
  }
  return os.str();
}

}  // namespace hcsnet
