// Unit tests for the ground-truth computations: distances, path DPs,
// locality, permeability, barriers, layers.

#include "fsprobe/reference.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <vector>

#include "fsprobe/errors.hpp"
#include "fsprobe/freespace.hpp"
#include "fsprobe/geometry.hpp"
#include "fsprobe/rng.hpp"

namespace fsprobe {
namespace reference {
namespace {

bit_matrix random_matrix(int n, int m, double zero_prob, rng& rand) {
  bit_matrix mat(n, m, 1);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= m; ++j)
      if (rand.uniform_real() < zero_prob) mat.set(i, j, 0);
  return mat;
}

/// Independent oracle: enumerate every monotone path and take the cheapest.
/// Exponential, so only for tiny matrices.
long long enumerate_min_cost(const bit_matrix& mat, bool diag_needs_zeros) {
  long long best = LLONG_MAX;
  std::function<void(int, int, long long)> go = [&](int i, int j,
                                                    long long cost) {
    cost += mat.at(i, j);
    if (cost >= best) return;
    if (i == mat.n && j == mat.m) {
      best = cost;
      return;
    }
    if (i < mat.n) go(i + 1, j, cost);
    if (j < mat.m) go(i, j + 1, cost);
    if (i < mat.n && j < mat.m &&
        (!diag_needs_zeros || (mat.at(i, j) == 0 && mat.at(i + 1, j + 1) == 0)))
      go(i + 1, j + 1, cost);
  };
  go(1, 1, 0);
  return best;
}

/// Elbow fixture: one zero at (1,1), row 6 entirely zero. The only cost-4
/// path climbs column 1 (four ones) and then walks the zero row; a DP whose
/// diagonal rule ignores entries can instead cut across the ones.
bit_matrix elbow_matrix() {
  bit_matrix mat(6, 6, 1);
  mat.set(1, 1, 0);
  for (int i = 1; i <= 6; ++i) mat.set(i, 6, 0);
  return mat;
}

/// 4x4 pattern with a zero-cost coupling along (1,1),(2,2),(3,3),(4,4).
bit_matrix staircase_matrix() {
  std::vector<std::vector<std::int32_t>> by_col = {
      {1, 4}, {2, 4}, {1, 3}, {1, 4}};
  return free_space_data::from_column_zeros(4, 4, by_col).to_matrix();
}

curve offset_pair_p() { return curve{{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}}; }
curve offset_pair_q() { return curve{{{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}}}; }

TEST(DiscreteFrechet, ParallelOffsetPair) {
  EXPECT_DOUBLE_EQ(discrete_frechet(offset_pair_p(), offset_pair_q()), 1.0);
}

TEST(DiscreteFrechet, ReversedPartnerForcesLongMatch) {
  curve q = offset_pair_q();
  std::reverse(q.pts.begin(), q.pts.end());
  // Some vertex pair at distance sqrt(5) is unavoidable once the directions
  // disagree.
  EXPECT_DOUBLE_EQ(discrete_frechet(offset_pair_p(), q), 2.23606797749979);
}

TEST(DiscreteHausdorff, IgnoresOrdering) {
  EXPECT_DOUBLE_EQ(discrete_hausdorff(offset_pair_p(), offset_pair_q()), 1.0);
  curve q = offset_pair_q();
  std::reverse(q.pts.begin(), q.pts.end());
  EXPECT_DOUBLE_EQ(discrete_hausdorff(offset_pair_p(), q), 1.0);
}

TEST(DiscreteHausdorff, AsymmetricCoverage) {
  curve p{{{0.0, 0.0}, {5.0, 0.0}}};
  curve q{{{0.0, 0.0}}};
  EXPECT_DOUBLE_EQ(discrete_hausdorff(p, q), 5.0);
}

TEST(Distances, HausdorffNeverExceedsFrechet) {
  rng rand(211);
  for (int k = 0; k < 50; ++k) {
    curve p = gen_straight_curve(10, 2, 0.5, 1.5, 0.9, rand);
    curve q = gen_straight_curve(7, 2, 0.5, 1.5, 0.9, rand);
    EXPECT_LE(discrete_hausdorff(p, q), discrete_frechet(p, q) + 1e-12);
  }
}

TEST(Distances, FrechetTriangleInequality) {
  rng rand(223);
  for (int k = 0; k < 30; ++k) {
    curve p = gen_straight_curve(8, 2, 0.5, 1.5, 0.9, rand);
    curve q = gen_straight_curve(6, 2, 0.5, 1.5, 0.9, rand);
    curve r = gen_straight_curve(9, 2, 0.5, 1.5, 0.9, rand);
    EXPECT_LE(discrete_frechet(p, r),
              discrete_frechet(p, q) + discrete_frechet(q, r) + 1e-9);
  }
}

TEST(Distances, InvariantUnderRigidMotions) {
  rng rand(227);
  curve p = gen_straight_curve(12, 2, 0.8, 1.2, 0.5, rand);
  curve q = perturb_within(p, 0.7, rand);
  const double df = discrete_frechet(p, q);
  const double dh = discrete_hausdorff(p, q);
  const double th = 0.83, tx = 4.5, ty = -2.25;
  auto moved = [&](const curve& c) {
    curve out = c;
    for (auto& pt : out.pts) {
      double x = pt[0], y = pt[1];
      pt[0] = std::cos(th) * x - std::sin(th) * y + tx;
      pt[1] = std::sin(th) * x + std::cos(th) * y + ty;
    }
    return out;
  };
  EXPECT_NEAR(discrete_frechet(moved(p), moved(q)), df, 1e-9);
  EXPECT_NEAR(discrete_hausdorff(moved(p), moved(q)), dh, 1e-9);
}

TEST(MinCostCoupling, AllOnesPaysTheDiagonal) {
  bit_matrix mat(3, 3, 1);
  EXPECT_EQ(min_cost_coupling(mat), 3);
  // Without usable diagonal steps the path has 2*3-1 cells, all ones.
  EXPECT_EQ(min_cost_diagonal_restricted(mat), 5);
}

TEST(MinCostCoupling, FreeOnZeroDiagonal) {
  bit_matrix mat(4, 4, 1);
  for (int i = 1; i <= 4; ++i) mat.set(i, i, 0);
  EXPECT_EQ(min_cost_coupling(mat), 0);
  EXPECT_EQ(min_cost_diagonal_restricted(mat), 0);
}

TEST(MinCostCoupling, StaircasePatternIsFree) {
  bit_matrix mat = staircase_matrix();
  EXPECT_EQ(min_cost_coupling(mat), 0);
  EXPECT_EQ(min_cost_diagonal_restricted(mat), 0);
}

TEST(MinCostCoupling, MatchesExhaustiveEnumeration) {
  rng rand(229);
  for (int k = 0; k < 200; ++k) {
    int n = static_cast<int>(rand.uniform_int(2, 5));
    int m = static_cast<int>(rand.uniform_int(2, 5));
    bit_matrix mat = random_matrix(n, m, rand.uniform_real(0.2, 0.8), rand);
    EXPECT_EQ(min_cost_coupling(mat), enumerate_min_cost(mat, false));
    EXPECT_EQ(min_cost_diagonal_restricted(mat),
              enumerate_min_cost(mat, true));
  }
}

TEST(MinCostCoupling, DiagonalRestrictionNeverHelps) {
  rng rand(233);
  for (int k = 0; k < 100; ++k) {
    bit_matrix mat = random_matrix(8, 8, 0.4, rand);
    EXPECT_LE(min_cost_coupling(mat), min_cost_diagonal_restricted(mat));
  }
}

TEST(CouplingPath, ReportsItsOwnCostAndValidSteps) {
  rng rand(239);
  for (int k = 0; k < 100; ++k) {
    bit_matrix mat = random_matrix(6, 7, 0.4, rand);
    cost_path p = min_cost_coupling_path(mat);
    EXPECT_EQ(p.cost, min_cost_coupling(mat));
    ASSERT_FALSE(p.cells.empty());
    EXPECT_EQ(p.cells.front(), std::make_pair(1, 1));
    EXPECT_EQ(p.cells.back(), std::make_pair(mat.n, mat.m));
    long long ones = 0;
    for (std::size_t s = 0; s < p.cells.size(); ++s) {
      if (mat.at(p.cells[s].first, p.cells[s].second) == 1) ++ones;
      if (s == 0) continue;
      int di = p.cells[s].first - p.cells[s - 1].first;
      int dj = p.cells[s].second - p.cells[s - 1].second;
      EXPECT_TRUE((di == 1 && dj == 0) || (di == 0 && dj == 1) ||
                  (di == 1 && dj == 1));
    }
    EXPECT_EQ(ones, p.cost);
    EXPECT_EQ(path_zero_count(mat, p),
              static_cast<long long>(p.cells.size()) - p.cost);
  }
}

TEST(DiagRestrictedPath, RespectsTheStepRule) {
  rng rand(241);
  for (int k = 0; k < 100; ++k) {
    bit_matrix mat = random_matrix(6, 6, 0.45, rand);
    cell_rect r{1, 1, 6, 6};
    cost_path p = min_cost_diag_restricted_path(mat, r);
    EXPECT_EQ(p.cost, min_cost_diagonal_restricted(mat));
    for (std::size_t s = 1; s < p.cells.size(); ++s) {
      int di = p.cells[s].first - p.cells[s - 1].first;
      int dj = p.cells[s].second - p.cells[s - 1].second;
      if (di == 1 && dj == 1)
        EXPECT_TRUE(diagonal_joins_zeros(mat, p.cells[s].first,
                                         p.cells[s].second));
    }
    // Tie-breaking is deterministic: recomputing gives the same path.
    cost_path again = min_cost_diag_restricted_path(mat, r);
    EXPECT_EQ(p.cells, again.cells);
  }
}

TEST(DiagRestrictedPath, SubRectStartsAndEndsAtCorners) {
  bit_matrix mat = staircase_matrix();
  cell_rect r{2, 2, 4, 4};
  cost_path p = min_cost_diag_restricted_path(mat, r);
  EXPECT_EQ(p.cells.front(), std::make_pair(2, 2));
  EXPECT_EQ(p.cells.back(), std::make_pair(4, 4));
}

TEST(ElbowFixture, OnlyCheapPathHugsTheZeroRow) {
  bit_matrix mat = elbow_matrix();
  EXPECT_EQ(min_cost_diagonal_restricted(mat), 4);
  cost_path p = min_cost_diag_restricted_path(mat, cell_rect{1, 1, 6, 6});
  EXPECT_EQ(p.cost, 4);
  // The unique cheapest path visits (1,1) and all six zeros of row 6.
  EXPECT_EQ(path_zero_count(mat, p), 7);
  EXPECT_EQ(layer_count(mat, cell_rect{1, 1, 6, 6}), 7);
}

TEST(LayerCount, CountsLongestDominanceChain) {
  bit_matrix all_zero(2, 2, 0);
  // (1,1) -> (1,2) -> (2,2) is a chain of three zeros.
  EXPECT_EQ(layer_count(all_zero, cell_rect{1, 1, 2, 2}), 3);
  bit_matrix diag(2, 2, 1);
  diag.set(1, 1, 0);
  diag.set(2, 2, 0);
  EXPECT_EQ(layer_count(diag, cell_rect{1, 1, 2, 2}), 2);
}

TEST(LayerCount, RequiresZeroCorners) {
  bit_matrix mat(3, 3, 1);
  mat.set(1, 1, 0);
  EXPECT_THROW(layer_count(mat, cell_rect{1, 1, 3, 3}), not_zero_corners);
}

TEST(ExactLocality, TallColumnSpreadExample) {
  // Zeros (1,1) and (1,4): same column, row spread 3 -> 3 / (2+0) = 1.5.
  std::vector<std::vector<std::int32_t>> by_col = {{1, 4}, {}, {}, {}};
  free_space_data d = free_space_data::from_column_zeros(4, 4, by_col);
  EXPECT_DOUBLE_EQ(exact_locality(d), 1.5);
}

TEST(ExactLocality, DiagonalOfFour) {
  bit_matrix mat(4, 4, 1);
  for (int i = 1; i <= 4; ++i) mat.set(i, i, 0);
  // Worst pair (1,1) vs (4,4): 3 / (2+3) = 0.6.
  EXPECT_DOUBLE_EQ(exact_locality(mat), 0.6);
}

TEST(ExactLocality, FewerThanTwoZerosIsZero) {
  bit_matrix mat(3, 3, 1);
  EXPECT_DOUBLE_EQ(exact_locality(mat), 0.0);
  mat.set(2, 2, 0);
  EXPECT_DOUBLE_EQ(exact_locality(mat), 0.0);
}

TEST(ExactLocality, ExtremesVersionMatchesBruteForce) {
  rng rand(251);
  for (int k = 0; k < 200; ++k) {
    bit_matrix mat = random_matrix(10, 10, rand.uniform_real(0.1, 0.6), rand);
    EXPECT_DOUBLE_EQ(exact_locality(mat), exact_locality_brute(mat));
  }
}

TEST(LocalityCensus, CleanExactlyAboveTMin) {
  rng rand(257);
  int nontrivial = 0;
  for (int k = 0; k < 100; ++k) {
    bit_matrix mat = random_matrix(9, 9, 0.3, rand);
    locality_census at_zero = take_locality_census(mat, 0.0);
    EXPECT_DOUBLE_EQ(at_zero.t_min, exact_locality_brute(mat));
    if (at_zero.t_min == 0.0) continue;
    ++nontrivial;
    EXPECT_TRUE(take_locality_census(mat, at_zero.t_min * (1 + 1e-12)).clean());
    EXPECT_FALSE(take_locality_census(mat, at_zero.t_min * 0.999).clean());
  }
  EXPECT_GT(nontrivial, 50);
}

TEST(LocalityCensus, FlagsTheSpreadColumn) {
  std::vector<std::vector<std::int32_t>> by_col(4);
  by_col[0] = {1, 4};
  for (int i = 2; i <= 4; ++i) by_col[static_cast<std::size_t>(i - 1)] = {i};
  bit_matrix mat = free_space_data::from_column_zeros(4, 4, by_col).to_matrix();
  locality_census c = take_locality_census(mat, 1.0);
  EXPECT_FALSE(c.clean());
  ASSERT_FALSE(c.second_order_cols.empty());
  EXPECT_EQ(c.second_order_cols.front(), 1);
  locality_census ok = take_locality_census(mat, 2.0);
  EXPECT_TRUE(ok.clean());
}

TEST(BrutePermeable, BandIsPermeableOnBothAxes) {
  std::vector<std::vector<std::int32_t>> by_col(6);
  for (int i = 1; i <= 6; ++i)
    for (int j = std::max(1, i - 1); j <= std::min(6, i + 1); ++j)
      by_col[static_cast<std::size_t>(i - 1)].push_back(j);
  bit_matrix mat = free_space_data::from_column_zeros(6, 6, by_col).to_matrix();
  EXPECT_TRUE(brute_permeable(mat, axis::columns, 1, 6));
  EXPECT_TRUE(brute_permeable(mat, axis::rows, 1, 6));
  EXPECT_TRUE(brute_permeable(mat, axis::columns, 2, 5));
}

TEST(BrutePermeable, DownhillBlocksAreImpermeable) {
  // First half has zeros only near the top row, second half only near the
  // bottom: a monotone path cannot decrease, so the block is impermeable,
  // yet no slice is empty.
  std::vector<std::vector<std::int32_t>> by_col(4);
  by_col[0] = {4};
  by_col[1] = {4};
  by_col[2] = {1};
  by_col[3] = {1};
  bit_matrix mat = free_space_data::from_column_zeros(4, 4, by_col).to_matrix();
  EXPECT_FALSE(brute_permeable(mat, axis::columns, 1, 4));
  EXPECT_TRUE(brute_permeable(mat, axis::columns, 1, 2));
  EXPECT_TRUE(brute_permeable(mat, axis::columns, 3, 4));
}

TEST(BrutePermeable, EmptySliceCutsTheBlock) {
  std::vector<std::vector<std::int32_t>> by_col = {{1}, {}, {3}};
  bit_matrix mat = free_space_data::from_column_zeros(3, 3, by_col).to_matrix();
  EXPECT_FALSE(brute_permeable(mat, axis::columns, 1, 3));
  EXPECT_TRUE(brute_permeable(mat, axis::columns, 1, 1));
  EXPECT_THROW(brute_permeable(mat, axis::columns, 0, 2), index_out_of_range);
}

TEST(CountBarriers, LoneInteriorZero) {
  bit_matrix mat(3, 3, 1);
  mat.set(2, 2, 0);
  auto [bc, br] = count_barriers(mat);
  EXPECT_EQ(bc, 2);
  EXPECT_EQ(br, 2);
}

TEST(CountBarriers, NoneOnZeroDiagonal) {
  bit_matrix mat(5, 5, 1);
  for (int i = 1; i <= 5; ++i) mat.set(i, i, 0);
  auto [bc, br] = count_barriers(mat);
  EXPECT_EQ(bc, 0);
  EXPECT_EQ(br, 0);
}

TEST(GreedyStrongWitness, CleanMatrixRemovesNothing) {
  bit_matrix mat(8, 8, 1);
  for (int i = 1; i <= 8; ++i) mat.set(i, i, 0);
  auto w = greedy_strong_witness(mat, 1.0);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->cols_removed.empty());
  EXPECT_TRUE(w->rows_removed.empty());
  EXPECT_DOUBLE_EQ(w->zeta, 0.0);
}

TEST(GreedyStrongWitness, RemovesTheSpreadColumnAndItsRows) {
  bit_matrix mat(8, 8, 1);
  for (int i = 1; i <= 8; ++i) mat.set(i, i, 0);
  mat.set(4, 3, 0);
  mat.set(4, 6, 0);
  auto w = greedy_strong_witness(mat, 1.0);
  ASSERT_TRUE(w.has_value());
  ASSERT_EQ(w->cols_removed.size(), 1u);
  EXPECT_EQ(w->cols_removed.front(), 4);
  // Rows 3 and 6 hold the stray zeros; row 4 crosses the spread column at
  // its diagonal zero.
  EXPECT_EQ(w->rows_removed, (std::vector<int>{3, 4, 6}));
  EXPECT_DOUBLE_EQ(w->zeta, 4.0 / 8.0);
}

}  // namespace
}  // namespace reference
}  // namespace fsprobe
