#include "hcsnet/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hcsnet/error.hpp"
#include "hcsnet/random.hpp"

namespace hcsnet {

namespace {

// Midpoints between `site` and every other RRH; the site itself if alone.
std::vector<Point2> edge_probes(const NetworkLayout& layout, RrhId site) {
  const Point2 p = layout.at(site).position;
  std::vector<Point2> probes;
  for (const Rrh& other : layout.rrhs) {
    if (other.id != site) probes.push_back(midpoint(p, other.position));
  }
  if (probes.empty()) probes.push_back(p);
  return probes;
}

ClusterAssignment group_assignment(std::vector<RrhId> group, RrhId head) {
  ClusterAssignment a;
  std::sort(group.begin(), group.end());
  a.members = group;
  a.exemplar_of.assign(group.size(), head);
  a.clusters = {std::move(group)};
  a.converged = true;
  return a;
}

void check_cluster_size(std::size_t cluster_size) {
  if (cluster_size < 1) throw DomainError("cluster size must be at least 1");
}

}  // namespace

const char* to_string(ClusteringScheme scheme) {
  switch (scheme) {
    case ClusteringScheme::kNone: return "none";
    case ClusteringScheme::kStatic: return "static";
    case ClusteringScheme::kSim: return "sim";
    case ClusteringScheme::kApbc: return "apbc";
  }
  return "?";
}

ClusteringScheme clustering_scheme_from_string(const std::string& name) {
  if (name == "none") return ClusteringScheme::kNone;
  if (name == "static") return ClusteringScheme::kStatic;
  if (name == "sim") return ClusteringScheme::kSim;
  if (name == "apbc") return ClusteringScheme::kApbc;
  throw ConfigError("clustering.scheme", "unknown scheme '" + name + "'");
}

std::vector<double> anchor_probe_rsrp(const NetworkLayout& layout,
                                      const ChannelModel& model, RrhId anchor) {
  const std::vector<Point2> probes = edge_probes(layout, anchor);
  std::vector<double> best(layout.size(), -std::numeric_limits<double>::infinity());
  for (const Point2& p : probes) {
    for (const Rrh& r : layout.rrhs) {
      best[r.id] = std::max(best[r.id], rsrp(model, r, p, 0.0));
    }
  }
  return best;
}

MeasurementCluster measurement_cluster(std::span<const double> probe_rsrp_dbm,
                                       RrhId anchor, double rsrp_threshold_db,
                                       std::size_t max_size) {
  if (anchor >= probe_rsrp_dbm.size()) {
    throw LookupError("unknown anchor RRH " + std::to_string(anchor));
  }
  if (max_size < 1) throw DomainError("measurement cluster size must be >= 1");

  const double top =
      *std::max_element(probe_rsrp_dbm.begin(), probe_rsrp_dbm.end());
  std::vector<RrhId> ranked;
  for (RrhId k = 0; k < probe_rsrp_dbm.size(); ++k) {
    if (k != anchor && probe_rsrp_dbm[k] >= top - rsrp_threshold_db) {
      ranked.push_back(k);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](RrhId a, RrhId b) {
    return probe_rsrp_dbm[a] > probe_rsrp_dbm[b];
  });

  MeasurementCluster mc;
  mc.anchor = anchor;
  mc.rsrp_threshold_db = rsrp_threshold_db;
  mc.members.push_back(anchor);
  for (RrhId k : ranked) {
    if (mc.members.size() >= max_size) break;
    mc.members.push_back(k);
  }
  std::sort(mc.members.begin(), mc.members.end());
  return mc;
}

MeasurementCluster measurement_cluster(const NetworkLayout& layout,
                                       const ChannelModel& model, RrhId anchor,
                                       double rsrp_threshold_db,
                                       std::size_t max_size) {
  layout.at(anchor);
  return measurement_cluster(anchor_probe_rsrp(layout, model, anchor), anchor,
                             rsrp_threshold_db, max_size);
}

bool comp_trigger(double sounding_sinr, double threshold) {
  return sounding_sinr < threshold;
}

PcgTable probe_pcg(const NetworkLayout& layout, const ChannelModel& model,
                   std::span<const RrhId> members, std::uint64_t seed,
                   std::size_t realizations) {
  if (realizations < 1) throw DomainError("pcg needs at least one realization");
  PcgTable table;
  for (RrhId i : members) {
    for (RrhId k : members) {
      if (i == k) continue;
      const Point2 probe = midpoint(layout.at(i).position, layout.at(k).position);
      double sum = 0.0;
      for (std::size_t r = 0; r < realizations; ++r) {
        // Both orientations of a pair see the same shadowing draws.
        const std::uint64_t key = mix_keys({std::min(i, k), std::max(i, k), r});
        const std::vector<double> links = rsrp_all(
            model, layout, probe, seed, Stream::kProbeShadowing, key);
        sum += pcg(links, i, k, model.noise_dbm);
      }
      table[{k, i}] = sum / static_cast<double>(realizations);
    }
  }
  return table;
}

SimilarityMatrix build_similarity(const MeasurementCluster& cluster,
                                  const PcgTable& pcg_values,
                                  double preference) {
  SimilarityMatrix s(cluster.members);
  const std::size_t n = s.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) {
        s(i, k) = preference;
        continue;
      }
      const auto it = pcg_values.find({s.ids()[k], s.ids()[i]});
      if (it == pcg_values.end()) {
        throw IncompleteInputError("missing pcg for candidate " +
                                   std::to_string(s.ids()[k]) + " serving " +
                                   std::to_string(s.ids()[i]));
      }
      if (!(it->second > 0.0) || !std::isfinite(it->second)) {
        throw DomainError("pcg values must be positive and finite");
      }
      s(i, k) = std::log(it->second);
    }
  }
  return s;
}

double median_off_diagonal(const SimilarityMatrix& s) {
  std::vector<double> v;
  for (std::size_t i = 0; i < s.n(); ++i) {
    for (std::size_t k = 0; k < s.n(); ++k) {
      if (i != k) v.push_back(s(i, k));
    }
  }
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

ApbcResult apbc_cluster(const NetworkLayout& layout, const ChannelModel& model,
                        RrhId anchor, const ApbcOptions& options,
                        std::uint64_t seed) {
  ApbcResult out;
  out.measurement = measurement_cluster(layout, model, anchor,
                                        options.rsrp_threshold_db,
                                        options.max_measurement_size);
  const PcgTable table = probe_pcg(layout, model, out.measurement.members, seed,
                                   options.pcg_realizations);
  SimilarityMatrix s = build_similarity(out.measurement, table, 0.0);
  s.set_preferences(options.median_preference ? median_off_diagonal(s)
                                              : options.preference);
  out.coordinated = ap_cluster(s, options.ap);
  return out;
}

std::vector<ClusterAssignment> static_cluster(const NetworkLayout& layout,
                                              std::size_t cluster_size) {
  check_cluster_size(cluster_size);
  const std::size_t n = layout.size();
  std::vector<char> taken(n, 0);
  std::vector<ClusterAssignment> out;
  for (RrhId seed_site = 0; seed_site < n; ++seed_site) {
    if (taken[seed_site]) continue;
    const Point2 p = layout.rrhs[seed_site].position;
    std::vector<RrhId> free;
    for (RrhId k = 0; k < n; ++k) {
      if (!taken[k] && k != seed_site) free.push_back(k);
    }
    std::stable_sort(free.begin(), free.end(), [&](RrhId a, RrhId b) {
      return distance(p, layout.rrhs[a].position) <
             distance(p, layout.rrhs[b].position);
    });
    std::vector<RrhId> group{seed_site};
    for (RrhId k : free) {
      if (group.size() >= cluster_size) break;
      group.push_back(k);
    }
    for (RrhId k : group) taken[k] = 1;
    out.push_back(group_assignment(std::move(group), seed_site));
  }
  return out;
}

std::vector<double> interference_coupling(const NetworkLayout& layout,
                                          const ChannelModel& model) {
  const std::size_t n = layout.size();
  // directed[a * n + b]: mean power of a over b's edge probes.
  std::vector<double> directed(n * n, 0.0);
  for (RrhId b = 0; b < n; ++b) {
    const std::vector<Point2> probes = edge_probes(layout, b);
    for (RrhId a = 0; a < n; ++a) {
      if (a == b) continue;
      double sum = 0.0;
      for (const Point2& p : probes) {
        sum += dbm_to_mw(rsrp(model, layout.rrhs[a], p, 0.0));
      }
      directed[a * n + b] = sum / static_cast<double>(probes.size());
    }
  }
  std::vector<double> coupling(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) coupling[a * n + b] = directed[a * n + b] + directed[b * n + a];
    }
  }
  return coupling;
}

std::vector<ClusterAssignment> sim_interference_cluster(
    std::span<const double> coupling, std::size_t n, std::size_t cluster_size) {
  check_cluster_size(cluster_size);
  if (coupling.size() != n * n) {
    throw ShapeError("coupling matrix is not n x n");
  }
  struct Pair {
    double weight;
    RrhId a, b;
  };
  std::vector<Pair> pairs;
  for (RrhId a = 0; a < n; ++a) {
    for (RrhId b = a + 1; b < n; ++b) pairs.push_back({coupling[a * n + b], a, b});
  }
  // Strongest first; equal weights keep (a, b) lexicographic order.
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.weight > y.weight; });

  std::vector<RrhId> group_of(n);
  std::iota(group_of.begin(), group_of.end(), 0);
  std::vector<std::vector<RrhId>> groups(n);
  for (RrhId k = 0; k < n; ++k) groups[k] = {k};

  for (const Pair& p : pairs) {
    const RrhId ga = group_of[p.a];
    const RrhId gb = group_of[p.b];
    if (ga == gb || groups[ga].size() + groups[gb].size() > cluster_size) continue;
    const RrhId keep = std::min(ga, gb);
    const RrhId drop = std::max(ga, gb);
    for (RrhId k : groups[drop]) group_of[k] = keep;
    groups[keep].insert(groups[keep].end(), groups[drop].begin(), groups[drop].end());
    groups[drop].clear();
  }

  std::vector<ClusterAssignment> out;
  for (auto& g : groups) {
    if (g.empty()) continue;
    std::sort(g.begin(), g.end());
    const RrhId head = g.front();
    out.push_back(group_assignment(std::move(g), head));
  }
  return out;
}

std::vector<ClusterAssignment> sim_interference_cluster(
    const NetworkLayout& layout, const ChannelModel& model,
    std::size_t cluster_size) {
  return sim_interference_cluster(interference_coupling(layout, model),
                                  layout.size(), cluster_size);
}

}  // namespace hcsnet
