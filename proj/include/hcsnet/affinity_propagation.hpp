#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hcsnet/units.hpp"

namespace hcsnet {

// Dense n x n similarity over a set of RRHs. Row i, column k holds how well
// RRH k suits as exemplar for RRH i; the diagonal holds the preferences.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // `ids` must be ascending and unique; values start at zero.
  explicit SimilarityMatrix(std::vector<RrhId> ids);
  SimilarityMatrix(std::vector<RrhId> ids, std::vector<double> values);

  std::size_t n() const { return ids_.size(); }
  const std::vector<RrhId>& ids() const { return ids_; }
  std::span<const double> values() const { return values_; }

  double operator()(std::size_t i, std::size_t k) const {
    return values_[i * n() + k];
  }
  double& operator()(std::size_t i, std::size_t k) {
    return values_[i * n() + k];
  }

  double preference(std::size_t k) const { return (*this)(k, k); }
  void set_preferences(double preference);

  // Local index of an RRH id; throws LookupError when absent.
  std::size_t index_of(RrhId id) const;

 private:
  std::vector<RrhId> ids_;
  std::vector<double> values_;
};

struct ApState {
  std::size_t n = 0;
  std::vector<double> r;  // responsibilities, row-major
  std::vector<double> a;  // availabilities, row-major
  double damping = 0.5;
  std::size_t iteration = 0;

  static ApState zeros(std::size_t n, double damping);

  double& resp(std::size_t i, std::size_t k) { return r[i * n + k]; }
  double resp(std::size_t i, std::size_t k) const { return r[i * n + k]; }
  double& avail(std::size_t i, std::size_t k) { return a[i * n + k]; }
  double avail(std::size_t i, std::size_t k) const { return a[i * n + k]; }
};

struct ClusterAssignment {
  std::vector<RrhId> members;       // ascending
  std::vector<RrhId> exemplar_of;   // parallel to members
  std::vector<std::vector<RrhId>> clusters;  // ordered by exemplar id
  bool converged = true;
  std::size_t iterations_used = 0;

  RrhId exemplar_for(RrhId id) const;
  // The cluster holding `id`; throws LookupError when absent.
  const std::vector<RrhId>& cluster_of(RrhId id) const;
  std::vector<RrhId> exemplars() const;
};

// Groups members by exemplar and fills `clusters`.
void finalize_clusters(ClusterAssignment& assignment);

// r(i,k) <- (1-l)[s(i,k) - max_{k' != k}(a(i,k') + s(i,k'))] + l r(i,k).
// Every entry reads only the availabilities of the previous iteration.
// Each entry costs n-1 evaluations of the competitor term.
ApState update_responsibilities(const SimilarityMatrix& s, ApState state);

// a(i,k) <- (1-l) min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
//           + l a(i,k), and a(k,k) <- (1-l) sum_{i' != k} max(0, r(i',k))
//           + l a(k,k). Each entry costs n-2 (n-1 on the diagonal) terms.
ApState update_availabilities(ApState state);

// Exemplars are the k with r(k,k) + a(k,k) > 0. If none emerges the node
// with the largest r(k,k) + a(k,k) is forced. Others join the exemplar of
// highest similarity; ties go to the lowest id.
ClusterAssignment extract_exemplars(const ApState& state,
                                    const SimilarityMatrix& s);

struct ApOptions {
  double damping = 0.5;
  std::size_t max_iter = 200;
  std::size_t stable_window = 10;
};

ClusterAssignment ap_cluster(const SimilarityMatrix& s,
                             const ApOptions& options = {});

// Assigns every node to its most similar exemplar (lowest id on ties).
ClusterAssignment assign_to_exemplars(const SimilarityMatrix& s,
                                      std::span<const std::size_t> exemplars);

// Sum of s(i, exemplar(i)) over all nodes; exemplars contribute s(e,e).
double net_similarity(const SimilarityMatrix& s,
                      const ClusterAssignment& assignment);

struct BruteForceResult {
  ClusterAssignment assignment;
  double net_similarity = 0.0;
};

inline constexpr std::size_t kBruteForceMaxNodes = 12;

// Exhaustive search over all non-empty exemplar subsets. Ties resolve to
// the lexicographically smallest exemplar id list.
BruteForceResult brute_force_exemplars(const SimilarityMatrix& s);

}  // namespace hcsnet
