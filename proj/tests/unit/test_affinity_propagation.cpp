#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "../support/random_instances.hpp"
#include "../support/reference_ap.hpp"
#include "hcsnet/affinity_propagation.hpp"
#include "hcsnet/error.hpp"

namespace hcsnet {
namespace {

using testing::dense;
using testing::random_similarity;

SimilarityMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<RrhId> ids(rows.size());
  std::iota(ids.begin(), ids.end(), RrhId{0});
  std::vector<double> v;
  for (const auto& row : rows) v.insert(v.end(), row.begin(), row.end());
  return SimilarityMatrix(ids, v);
}

void expect_matches(const ApState& got, const testing::RefMessages& want, double tol) {
  for (std::size_t i = 0; i < got.n; ++i) {
    for (std::size_t k = 0; k < got.n; ++k) {
      ASSERT_NEAR(got.resp(i, k), want.r[i][k], tol) << "r(" << i << "," << k << ")";
      ASSERT_NEAR(got.avail(i, k), want.a[i][k], tol) << "a(" << i << "," << k << ")";
    }
  }
}

TEST(Similarity, ShapeAndLookupErrors) {
  EXPECT_THROW(SimilarityMatrix(std::vector<RrhId>{}), ShapeError);
  EXPECT_THROW(SimilarityMatrix(std::vector<RrhId>{2, 1}), ShapeError);
  EXPECT_THROW(SimilarityMatrix(std::vector<RrhId>{1, 1}), ShapeError);
  EXPECT_THROW(SimilarityMatrix({0, 1}, {1.0, 2.0, 3.0}), ShapeError);
  const SimilarityMatrix s(std::vector<RrhId>{3, 8, 9});
  EXPECT_EQ(s.index_of(8), 1u);
  EXPECT_THROW(s.index_of(4), LookupError);
}

TEST(Responsibilities, SingleNodeTracksPreference) {
  SimilarityMatrix s(std::vector<RrhId>{0});
  s.set_preferences(-3.0);
  ApState st = ApState::zeros(1, 0.5);
  st = update_responsibilities(s, st);
  EXPECT_DOUBLE_EQ(st.resp(0, 0), 0.5 * -3.0 + 0.5 * 0.0);
  st = update_responsibilities(s, st);
  EXPECT_DOUBLE_EQ(st.resp(0, 0), 0.5 * -3.0 + 0.5 * -1.5);
}

TEST(Responsibilities, TwoCandidateClosedForm) {
  const SimilarityMatrix s = from_rows({{-2.0, -0.5}, {-1.5, -4.0}});
  const ApState st = update_responsibilities(s, ApState::zeros(2, 0.0));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_DOUBLE_EQ(st.resp(i, k), s(i, k) - s(i, 1 - k));
    }
  }
}

TEST(Responsibilities, ShapeMismatchIsShapeError) {
  const SimilarityMatrix s(std::vector<RrhId>{0, 1, 2});
  EXPECT_THROW(update_responsibilities(s, ApState::zeros(2, 0.5)), ShapeError);
  EXPECT_THROW(ApState::zeros(2, 1.0), DomainError);
}

TEST(Availabilities, NonPositiveResponsibilitiesGiveDampedSelfTerm) {
  ApState st = ApState::zeros(3, 0.5);
  const double r[3][3] = {{-1.0, -2.0, -0.5}, {-3.0, -0.2, -1.0}, {-0.1, -4.0, -2.5}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) st.resp(i, k) = r[i][k];
  }
  st = update_availabilities(st);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (i == k) continue;
      EXPECT_LE(st.avail(i, k), 0.0);
      EXPECT_DOUBLE_EQ(st.avail(i, k), 0.5 * r[k][k]);
    }
  }
}

TEST(Availabilities, TwoNodesUndamped) {
  ApState st = ApState::zeros(2, 0.0);
  st.resp(0, 0) = 1.5;
  st.resp(1, 1) = -2.0;
  st.resp(0, 1) = 4.0;
  st.resp(1, 0) = 3.0;
  st = update_availabilities(st);
  EXPECT_DOUBLE_EQ(st.avail(1, 0), std::min(0.0, 1.5));
  EXPECT_DOUBLE_EQ(st.avail(0, 1), std::min(0.0, -2.0));
  EXPECT_EQ(st.iteration, 1u);
}

TEST(MessageUpdates, MatchReferenceOnRandomFiveByFive) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const SimilarityMatrix s = random_similarity(5, rng);
    const double lambda = (trial % 4) * 0.25;
    ApState st = ApState::zeros(5, lambda);
    testing::RefMessages ref = testing::ref_zero(5);
    for (int it = 0; it < 3; ++it) {
      st = update_responsibilities(s, st);
      ref = testing::ref_responsibilities(dense(s), ref, lambda);
      expect_matches(st, ref, 1e-12);
      st = update_availabilities(st);
      ref = testing::ref_availabilities(ref, lambda);
      expect_matches(st, ref, 1e-12);
    }
  }
}

TEST(MessageUpdates, ResponsibilitiesReadPreviousAvailabilities) {
  // Perturbing r before the update must not change the undamped result:
  // every entry depends only on s and the previous availabilities.
  std::mt19937_64 rng(8);
  const SimilarityMatrix s = random_similarity(6, rng);
  ApState st = ApState::zeros(6, 0.0);
  for (int it = 0; it < 4; ++it) st = update_availabilities(update_responsibilities(s, st));
  ApState noisy = st;
  std::normal_distribution<double> noise(0.0, 5.0);
  for (double& r : noisy.r) r += noise(rng);
  const ApState a = update_responsibilities(s, st);
  const ApState b = update_responsibilities(s, noisy);
  for (std::size_t k = 0; k < a.r.size(); ++k) EXPECT_DOUBLE_EQ(a.r[k], b.r[k]);
}

TEST(MessageUpdates, OffDiagonalAvailabilitiesStayNonPositive) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const SimilarityMatrix s = random_similarity(n, rng);
    ApState st = ApState::zeros(n, 0.5);
    for (int it = 0; it < 30; ++it) {
      st = update_availabilities(update_responsibilities(s, st));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          ASSERT_TRUE(std::isfinite(st.resp(i, k)) && std::isfinite(st.avail(i, k)));
          if (i != k) {
            ASSERT_LE(st.avail(i, k), 0.0);
          }
        }
      }
    }
  }
}

TEST(MessageUpdates, DampingLeavesFixedPointUnchanged) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const SimilarityMatrix s = random_similarity(n, rng);
    ApState st = ApState::zeros(n, 0.5);
    for (int it = 0; it < 3000; ++it) st = update_availabilities(update_responsibilities(s, st));
    // Accept only instances whose undamped step is already stationary.
    ApState undamped = st;
    undamped.damping = 0.0;
    undamped = update_availabilities(update_responsibilities(s, undamped));
    double drift = 0.0;
    for (std::size_t k = 0; k < st.r.size(); ++k) {
      drift = std::max({drift, std::abs(undamped.r[k] - st.r[k]),
                        std::abs(undamped.a[k] - st.a[k])});
    }
    if (drift > 1e-9) continue;
    ++checked;
    for (double lambda : {0.1, 0.5, 0.9}) {
      ApState damped = st;
      damped.damping = lambda;
      damped = update_availabilities(update_responsibilities(s, damped));
      for (std::size_t k = 0; k < st.r.size(); ++k) {
        EXPECT_NEAR(damped.r[k], st.r[k], 1e-8);
        EXPECT_NEAR(damped.a[k], st.a[k], 1e-8);
      }
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(Exemplars, DominantPreferencesGiveSingletons) {
  std::mt19937_64 rng(3);
  SimilarityMatrix s = random_similarity(6, rng);
  s.set_preferences(100.0);
  const ClusterAssignment c = ap_cluster(s);
  EXPECT_EQ(c.clusters.size(), 6u);
  for (RrhId id = 0; id < 6; ++id) EXPECT_EQ(c.exemplar_for(id), id);
}

TEST(Exemplars, WeakPreferencesGiveOneCluster) {
  SimilarityMatrix s = from_rows({{0, -1, -1}, {-1, 0, -1}, {-1, -1, 0}});
  s.set_preferences(-100.0);
  const ClusterAssignment ap = ap_cluster(s);
  const BruteForceResult bf = brute_force_exemplars(s);
  ASSERT_EQ(bf.assignment.clusters.size(), 1u);
  EXPECT_EQ(ap.clusters.size(), 1u);
  EXPECT_DOUBLE_EQ(net_similarity(s, ap), bf.net_similarity);
}

TEST(Exemplars, AssignmentTieGoesToLowestId) {
  const SimilarityMatrix s = from_rows({{5, -1, -1}, {-1, 5, -1}, {-1, -1, 0}});
  const std::size_t exemplars[] = {0, 1};
  const ClusterAssignment c = assign_to_exemplars(s, exemplars);
  EXPECT_EQ(c.exemplar_for(2), 0u);
}

TEST(Exemplars, ForcedWhenNoneEmerges) {
  const SimilarityMatrix s = from_rows({{-5, -1}, {-1, -3}});
  ApState st = ApState::zeros(2, 0.0);
  st.resp(0, 0) = -4.0;
  st.resp(1, 1) = -2.0;
  st.iteration = 1;
  const ClusterAssignment c = extract_exemplars(st, s);
  EXPECT_EQ(c.exemplars(), std::vector<RrhId>{1});
  EXPECT_EQ(c.exemplar_for(0), 1u);
}

TEST(ApCluster, SingleNodeIsItsOwnExemplar) {
  SimilarityMatrix s(std::vector<RrhId>{4});
  s.set_preferences(-2.0);
  const ClusterAssignment c = ap_cluster(s);
  EXPECT_EQ(c.exemplar_for(4), 4u);
  EXPECT_TRUE(c.converged);
  EXPECT_EQ(c.iterations_used, 1u);
}

TEST(ApCluster, DeterministicAndClustersPartition) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const SimilarityMatrix s = random_similarity(n, rng);
    const ClusterAssignment a = ap_cluster(s);
    const ClusterAssignment b = ap_cluster(s);
    EXPECT_EQ(a.exemplar_of, b.exemplar_of);
    std::vector<RrhId> all;
    for (const auto& c : a.clusters) {
      all.insert(all.end(), c.begin(), c.end());
      const RrhId e = a.exemplar_for(c.front());
      EXPECT_EQ(a.exemplar_for(e), e);
      for (RrhId id : c) EXPECT_EQ(a.exemplar_for(id), e);
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, s.ids());
  }
}

TEST(ApCluster, RejectsBadOptions) {
  const SimilarityMatrix s(std::vector<RrhId>{0, 1});
  EXPECT_THROW(ap_cluster(s, {0.5, 0, 10}), DomainError);
  EXPECT_THROW(ap_cluster(s, {1.0, 10, 10}), DomainError);
  SimilarityMatrix bad(std::vector<RrhId>{0, 1});
  bad(0, 1) = INFINITY;
  EXPECT_THROW(ap_cluster(bad), DomainError);
}

TEST(ApCluster, NearBruteForceOptimumOnFiveNodes) {
  std::mt19937_64 rng(99);
  int good = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SimilarityMatrix s = random_similarity(5, rng);
    const double opt = brute_force_exemplars(s).net_similarity;
    const double got = net_similarity(s, ap_cluster(s));
    EXPECT_LE(got, opt + 1e-9);
    if (got >= opt - 0.05 * std::abs(opt)) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(ApCluster, PermutationEquivariant) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + trial % 9;
    const SimilarityMatrix s = random_similarity(n, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    SimilarityMatrix p(s.ids());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) p(perm[i], perm[k]) = s(i, k);
    }
    const ClusterAssignment a = ap_cluster(s);
    const ClusterAssignment b = ap_cluster(p);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(perm[a.exemplar_for(static_cast<RrhId>(i))],
                b.exemplar_for(static_cast<RrhId>(perm[i])))
          << "trial " << trial;
    }
  }
}

TEST(BruteForce, SingleNodeNetIsPreference) {
  SimilarityMatrix s(std::vector<RrhId>{0});
  s.set_preferences(-7.5);
  EXPECT_DOUBLE_EQ(brute_force_exemplars(s).net_similarity, -7.5);
}

TEST(BruteForce, TwoNodesHandEnumeration) {
  // Subsets: {0}: -10 - 1, {1}: -1 - 10, {0,1}: -20. Tie resolves to {0}.
  SimilarityMatrix s = from_rows({{0, -1}, {-1, 0}});
  s.set_preferences(-10.0);
  const BruteForceResult r = brute_force_exemplars(s);
  EXPECT_DOUBLE_EQ(r.net_similarity, -11.0);
  EXPECT_EQ(r.assignment.clusters.size(), 1u);
  EXPECT_EQ(r.assignment.exemplars(), std::vector<RrhId>{0});
}

TEST(BruteForce, AllZeroPicksLowestSubset) {
  const SimilarityMatrix s(std::vector<RrhId>{0, 1, 2});
  const BruteForceResult r = brute_force_exemplars(s);
  EXPECT_DOUBLE_EQ(r.net_similarity, 0.0);
  EXPECT_EQ(r.assignment.exemplars(), std::vector<RrhId>{0});
}

TEST(BruteForce, SizeGuard) {
  std::vector<RrhId> ids(13);
  std::iota(ids.begin(), ids.end(), RrhId{0});
  EXPECT_THROW(brute_force_exemplars(SimilarityMatrix(ids)), SizeGuardError);
}

TEST(BruteForce, MatchesIndependentEnumeration) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const SimilarityMatrix s = random_similarity(n, rng);
    double best = -INFINITY;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1u) {
          total += s(i, i);
          continue;
        }
        double top = -INFINITY;
        for (std::size_t k = 0; k < n; ++k) {
          if (mask >> k & 1u) top = std::max(top, s(i, k));
        }
        total += top;
      }
      best = std::max(best, total);
    }
    const BruteForceResult r = brute_force_exemplars(s);
    EXPECT_NEAR(r.net_similarity, best, 1e-12);
    EXPECT_NEAR(net_similarity(s, r.assignment), best, 1e-12);
  }
}

}  // namespace
}  // namespace hcsnet
