#include "hcsnet/affinity_propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "hcsnet/error.hpp"

namespace hcsnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_ids(const std::vector<RrhId>& ids) {
  if (ids.empty()) throw ShapeError("similarity matrix needs at least one node");
  if (!std::is_sorted(ids.begin(), ids.end()) ||
      std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ShapeError("similarity ids must be ascending and unique");
  }
}

void check_shape(const SimilarityMatrix& s, const ApState& state) {
  if (state.n != s.n() || state.r.size() != s.n() * s.n() ||
      state.a.size() != s.n() * s.n()) {
    throw ShapeError("AP state is " + std::to_string(state.n) +
                     " wide but the similarity matrix has " +
                     std::to_string(s.n()) + " nodes");
  }
}

void check_damping(double damping) {
  if (!(damping >= 0.0 && damping < 1.0)) {
    throw DomainError("damping must lie in [0, 1)");
  }
}

std::vector<std::size_t> exemplar_indices(const ApState& state) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < state.n; ++k) {
    if (state.resp(k, k) + state.avail(k, k) > 0.0) out.push_back(k);
  }
  return out;
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::vector<RrhId> ids)
    : ids_(std::move(ids)), values_(ids_.size() * ids_.size(), 0.0) {
  check_ids(ids_);
}

SimilarityMatrix::SimilarityMatrix(std::vector<RrhId> ids,
                                   std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  check_ids(ids_);
  if (values_.size() != ids_.size() * ids_.size()) {
    throw ShapeError("similarity values do not form an n x n matrix");
  }
}

void SimilarityMatrix::set_preferences(double preference) {
  for (std::size_t k = 0; k < n(); ++k) (*this)(k, k) = preference;
}

std::size_t SimilarityMatrix::index_of(RrhId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw LookupError("RRH " + std::to_string(id) + " not in similarity matrix");
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

ApState ApState::zeros(std::size_t n, double damping) {
  check_damping(damping);
  ApState st;
  st.n = n;
  st.r.assign(n * n, 0.0);
  st.a.assign(n * n, 0.0);
  st.damping = damping;
  return st;
}

RrhId ClusterAssignment::exemplar_for(RrhId id) const {
  const auto it = std::lower_bound(members.begin(), members.end(), id);
  if (it == members.end() || *it != id) {
    throw LookupError("RRH " + std::to_string(id) + " not in assignment");
  }
  return exemplar_of[static_cast<std::size_t>(it - members.begin())];
}

const std::vector<RrhId>& ClusterAssignment::cluster_of(RrhId id) const {
  for (const auto& c : clusters) {
    if (std::binary_search(c.begin(), c.end(), id)) return c;
  }
  throw LookupError("RRH " + std::to_string(id) + " not in any cluster");
}

std::vector<RrhId> ClusterAssignment::exemplars() const {
  std::vector<RrhId> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (exemplar_of[i] == members[i]) out.push_back(members[i]);
  }
  return out;
}

void finalize_clusters(ClusterAssignment& assignment) {
  std::map<RrhId, std::vector<RrhId>> groups;
  for (std::size_t i = 0; i < assignment.members.size(); ++i) {
    groups[assignment.exemplar_of[i]].push_back(assignment.members[i]);
  }
  assignment.clusters.clear();
  for (auto& [exemplar, group] : groups) {
    std::sort(group.begin(), group.end());
    assignment.clusters.push_back(std::move(group));
  }
}

ApState update_responsibilities(const SimilarityMatrix& s, ApState state) {
  check_shape(s, state);
  const std::size_t n = state.n;
  const double lambda = state.damping;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      // With no competitor the term vanishes, so r(0,0) tracks s(0,0).
      double competitor = n == 1 ? 0.0 : kNegInf;
      for (std::size_t kp = 0; kp < n; ++kp) {
        if (kp == k) continue;
        competitor = std::max(competitor, state.avail(i, kp) + s(i, kp));
      }
      const double fresh = s(i, k) - competitor;
      state.resp(i, k) = (1.0 - lambda) * fresh + lambda * state.resp(i, k);
    }
  }
  return state;
}

ApState update_availabilities(ApState state) {
  const std::size_t n = state.n;
  if (state.r.size() != n * n || state.a.size() != n * n) {
    throw ShapeError("AP state matrices do not match its width");
  }
  const double lambda = state.damping;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double support = 0.0;
      for (std::size_t ip = 0; ip < n; ++ip) {
        if (ip == i || ip == k) continue;
        support += std::max(0.0, state.resp(ip, k));
      }
      const double fresh =
          i == k ? support : std::min(0.0, state.resp(k, k) + support);
      state.avail(i, k) = (1.0 - lambda) * fresh + lambda * state.avail(i, k);
    }
  }
  ++state.iteration;
  return state;
}

ClusterAssignment assign_to_exemplars(const SimilarityMatrix& s,
                                      std::span<const std::size_t> exemplars) {
  if (exemplars.empty()) throw DomainError("at least one exemplar is required");
  const std::size_t n = s.n();
  std::vector<char> is_exemplar(n, 0);
  for (std::size_t e : exemplars) {
    if (e >= n) throw LookupError("exemplar index out of range");
    is_exemplar[e] = 1;
  }
  ClusterAssignment out;
  out.members = s.ids();
  out.exemplar_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_exemplar[i]) {
      out.exemplar_of[i] = s.ids()[i];
      continue;
    }
    std::size_t best = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (!is_exemplar[k]) continue;
      if (best == n || s(i, k) > s(i, best)) best = k;
    }
    out.exemplar_of[i] = s.ids()[best];
  }
  finalize_clusters(out);
  return out;
}

ClusterAssignment extract_exemplars(const ApState& state,
                                    const SimilarityMatrix& s) {
  check_shape(s, state);
  std::vector<std::size_t> exemplars = exemplar_indices(state);
  if (exemplars.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < state.n; ++k) {
      if (state.resp(k, k) + state.avail(k, k) >
          state.resp(best, best) + state.avail(best, best)) {
        best = k;
      }
    }
    exemplars.push_back(best);
  }
  ClusterAssignment out = assign_to_exemplars(s, exemplars);
  out.iterations_used = state.iteration;
  return out;
}

ClusterAssignment ap_cluster(const SimilarityMatrix& s,
                             const ApOptions& options) {
  if (options.max_iter < 1) throw DomainError("max_iter must be at least 1");
  check_damping(options.damping);
  for (double v : s.values()) {
    if (!std::isfinite(v)) throw DomainError("similarity values must be finite");
  }

  ApState state = ApState::zeros(s.n(), options.damping);
  if (s.n() == 1) {
    state = update_availabilities(update_responsibilities(s, std::move(state)));
    ClusterAssignment out = extract_exemplars(state, s);
    out.converged = true;
    return out;
  }

  std::vector<std::size_t> previous;
  std::size_t unchanged = 0;
  bool converged = false;
  while (state.iteration < options.max_iter) {
    state = update_responsibilities(s, std::move(state));
    state = update_availabilities(std::move(state));
    std::vector<std::size_t> current = exemplar_indices(state);
    unchanged = (!current.empty() && current == previous) ? unchanged + 1 : 0;
    previous = std::move(current);
    if (unchanged >= options.stable_window) {
      converged = true;
      break;
    }
  }
  ClusterAssignment out = extract_exemplars(state, s);
  out.converged = converged;
  return out;
}

double net_similarity(const SimilarityMatrix& s,
                      const ClusterAssignment& assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < s.n(); ++i) {
    total += s(i, s.index_of(assignment.exemplar_for(s.ids()[i])));
  }
  return total;
}

BruteForceResult brute_force_exemplars(const SimilarityMatrix& s) {
  const std::size_t n = s.n();
  if (n > kBruteForceMaxNodes) {
    throw SizeGuardError("brute force limited to " +
                         std::to_string(kBruteForceMaxNodes) + " nodes");
  }
  BruteForceResult best;
  std::vector<std::size_t> best_subset;
  bool have = false;
  std::vector<std::size_t> subset;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    subset.clear();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) subset.push_back(k);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        total += s(i, i);
        continue;
      }
      double top = kNegInf;
      for (std::size_t e : subset) top = std::max(top, s(i, e));
      total += top;
    }
    if (!have || total > best.net_similarity ||
        (total == best.net_similarity &&
         std::lexicographical_compare(subset.begin(), subset.end(),
                                      best_subset.begin(), best_subset.end()))) {
      have = true;
      best.net_similarity = total;
      best_subset = subset;
    }
  }
  best.assignment = assign_to_exemplars(s, best_subset);
  return best;
}

}  // namespace hcsnet
