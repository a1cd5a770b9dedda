#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcsnet/affinity_propagation.hpp"
#include "hcsnet/channel.hpp"
#include "hcsnet/topology.hpp"

namespace hcsnet {

enum class ClusteringScheme { kNone, kStatic, kSim, kApbc };

const char* to_string(ClusteringScheme scheme);
ClusteringScheme clustering_scheme_from_string(const std::string& name);

// The RRHs sharing measurements with an anchor (offline phase).
struct MeasurementCluster {
  RrhId anchor = 0;
  std::vector<RrhId> members;  // ascending, contains anchor
  double rsrp_threshold_db = 0.0;
};

// Shadowing-free RSRP of every RRH at the anchor's edge probes: the
// midpoints between the anchor and each other site. Each RRH scores its
// best probe.
std::vector<double> anchor_probe_rsrp(const NetworkLayout& layout,
                                      const ChannelModel& model, RrhId anchor);

MeasurementCluster measurement_cluster(std::span<const double> probe_rsrp_dbm,
                                       RrhId anchor, double rsrp_threshold_db,
                                       std::size_t max_size);
MeasurementCluster measurement_cluster(const NetworkLayout& layout,
                                       const ChannelModel& model, RrhId anchor,
                                       double rsrp_threshold_db,
                                       std::size_t max_size);

// True when the sounding SINR (linear) is strictly below the threshold.
bool comp_trigger(double sounding_sinr, double threshold);

// Keyed by (candidate exemplar k, served RRH i).
using PcgTable = std::map<std::pair<RrhId, RrhId>, double>;

// pcg(k,i) for a probe UE at the midpoint of sites i and k, served by i,
// averaged over `realizations` shadowing draws.
PcgTable probe_pcg(const NetworkLayout& layout, const ChannelModel& model,
                   std::span<const RrhId> members, std::uint64_t seed,
                   std::size_t realizations);

// s(i,k) = log pcg(k,i) off the diagonal, s(k,k) = preference.
SimilarityMatrix build_similarity(const MeasurementCluster& cluster,
                                  const PcgTable& pcg_values,
                                  double preference);

double median_off_diagonal(const SimilarityMatrix& s);

struct ApbcOptions {
  double rsrp_threshold_db = 20.0;
  std::size_t max_measurement_size = 7;
  std::size_t pcg_realizations = 10;
  bool median_preference = true;
  double preference = 0.0;  // used when median_preference is false
  ApOptions ap;
};

struct ApbcResult {
  MeasurementCluster measurement;
  ClusterAssignment coordinated;
};

// Offline measurement cluster followed by online affinity propagation.
ApbcResult apbc_cluster(const NetworkLayout& layout, const ChannelModel& model,
                        RrhId anchor, const ApbcOptions& options,
                        std::uint64_t seed);

// Fixed geographic groups: the lowest unassigned id seeds a group and pulls
// in its cluster_size - 1 nearest unassigned sites.
std::vector<ClusterAssignment> static_cluster(const NetworkLayout& layout,
                                              std::size_t cluster_size);

// Symmetric n x n (row-major) mutual interference coupling in mW: the
// directed powers a -> b and b -> a, each averaged over the receiving
// site's edge probes.
std::vector<double> interference_coupling(const NetworkLayout& layout,
                                          const ChannelModel& model);

// Greedy merge of the most strongly coupled pairs while group sizes allow.
std::vector<ClusterAssignment> sim_interference_cluster(
    std::span<const double> coupling, std::size_t n, std::size_t cluster_size);
std::vector<ClusterAssignment> sim_interference_cluster(
    const NetworkLayout& layout, const ChannelModel& model,
    std::size_t cluster_size);

}  // namespace hcsnet
