#pragma once

// Exact (non-sublinear) computations used as ground truth: distances, optimal
// couplings, locality measurements, permeability, barriers, and layer
// decompositions. Everything here reads whole curves or whole matrices and is
// meant for certification, witness re-checking, and tests — not for the
// query-bounded code paths.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsprobe/errors.hpp"
#include "fsprobe/freespace.hpp"
#include "fsprobe/geometry.hpp"

namespace fsprobe::reference {

namespace detail {
constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
}

/// Discrete Frechet distance: the smallest delta such that a coupling path
/// exists whose every cell (i, j) has dist(p_i, q_j) <= delta.
inline double discrete_frechet(const curve& p, const curve& q) {
  validate(p);
  validate(q);
  if (p.dim() != q.dim()) throw bad_param("discrete_frechet: dim mismatch");
  std::size_t n = p.size(), m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double d = dist(p[i], q[j]);
      double best;
      if (i == 0 && j == 0) best = d;
      else if (i == 0) best = std::max(cur[j - 1], d);
      else if (j == 0) best = std::max(prev[j], d);
      else best = std::max(std::min({prev[j], cur[j - 1], prev[j - 1]}), d);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

/// Discrete Hausdorff distance between the vertex sets.
inline double discrete_hausdorff(const curve& p, const curve& q) {
  validate(p);
  validate(q);
  if (p.dim() != q.dim()) throw bad_param("discrete_hausdorff: dim mismatch");
  double h = 0.0;
  for (const point& a : p.pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const point& b : q.pts) best = std::min(best, dist(a, b));
    h = std::max(h, best);
  }
  for (const point& b : q.pts) {
    double best = std::numeric_limits<double>::infinity();
    for (const point& a : p.pts) best = std::min(best, dist(a, b));
    h = std::max(h, best);
  }
  return h;
}

/// Minimum number of one-entries visited by a monotone path from (1,1) to
/// (n,m) with steps (+1,0), (0,+1), (+1,+1). Zero iff the discrete Frechet
/// distance of the generating curves is within the matrix threshold.
inline long long min_cost_coupling(const bit_matrix& mat) {
  int n = mat.n, m = mat.m;
  std::vector<long long> prev(static_cast<std::size_t>(m)),
      cur(static_cast<std::size_t>(m));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      long long c = mat.at(i, j);
      long long best;
      if (i == 1 && j == 1) best = c;
      else if (i == 1) best = cur[static_cast<std::size_t>(j - 2)] + c;
      else if (j == 1) best = prev[static_cast<std::size_t>(j - 1)] + c;
      else
        best = std::min({prev[static_cast<std::size_t>(j - 1)],
                         cur[static_cast<std::size_t>(j - 2)],
                         prev[static_cast<std::size_t>(j - 2)]}) +
               c;
      cur[static_cast<std::size_t>(j - 1)] = best;
    }
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(m - 1)];
}

/// A coupling path and its cost.
struct cost_path {
  long long cost = 0;
  std::vector<std::pair<int, int>> cells;  ///< (column, row), 1-based
};

/// min_cost_coupling with an optimal path. Reconstruction walks back from
/// (n,m) preferring the diagonal predecessor, then the column-step
/// predecessor (i-1, j), then the row-step predecessor (i, j-1); ties are
/// therefore broken deterministically. Memory O(n*m): small matrices only.
inline cost_path min_cost_coupling_path(const bit_matrix& mat) {
  int n = mat.n, m = mat.m;
  auto idx = [m](int i, int j) {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(m) +
           static_cast<std::size_t>(j - 1);
  };
  std::vector<long long> dp(static_cast<std::size_t>(n) *
                            static_cast<std::size_t>(m));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= m; ++j) {
      long long c = mat.at(i, j);
      long long best = detail::kInf;
      if (i == 1 && j == 1) best = 0;
      if (i > 1 && j > 1) best = std::min(best, dp[idx(i - 1, j - 1)]);
      if (i > 1) best = std::min(best, dp[idx(i - 1, j)]);
      if (j > 1) best = std::min(best, dp[idx(i, j - 1)]);
      dp[idx(i, j)] = best + c;
    }
  cost_path out;
  out.cost = dp[idx(n, m)];
  int i = n, j = m;
  out.cells.emplace_back(i, j);
  while (i > 1 || j > 1) {
    long long need = dp[idx(i, j)] - mat.at(i, j);
    if (i > 1 && j > 1 && dp[idx(i - 1, j - 1)] == need) { --i; --j; }
    else if (i > 1 && dp[idx(i - 1, j)] == need) { --i; }
    else { --j; }
    out.cells.emplace_back(i, j);
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

/// Like min_cost_coupling, but the diagonal step (i,j) -> (i+1,j+1) is only
/// allowed when both of its endpoints are zero entries. On the all-one matrix
/// this forces a pure staircase (cost n+m-1 instead of max(n,m)).
inline long long min_cost_diagonal_restricted(const bit_matrix& mat) {
  int n = mat.n, m = mat.m;
  std::vector<long long> prev(static_cast<std::size_t>(m)),
      cur(static_cast<std::size_t>(m));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      long long c = mat.at(i, j);
      long long best = detail::kInf;
      if (i == 1 && j == 1) best = 0;
      if (i > 1) best = std::min(best, prev[static_cast<std::size_t>(j - 1)]);
      if (j > 1) best = std::min(best, cur[static_cast<std::size_t>(j - 2)]);
      if (i > 1 && j > 1 && mat.at(i, j) == 0 && mat.at(i - 1, j - 1) == 0)
        best = std::min(best, prev[static_cast<std::size_t>(j - 2)]);
      cur[static_cast<std::size_t>(j - 1)] = best + c;
    }
    std::swap(prev, cur);
  }
  return prev[static_cast<std::size_t>(m - 1)];
}

/// Axis-aligned cell rectangle, corners (i1,j1) and (i2,j2) inclusive,
/// 1-based, i1 <= i2 and j1 <= j2.
struct cell_rect {
  int i1, j1, i2, j2;
};

inline void check_rect(const bit_matrix& mat, const cell_rect& r,
                       const char* who) {
  if (r.i1 < 1 || r.j1 < 1 || r.i2 > mat.n || r.j2 > mat.m)
    throw index_out_of_range(std::string(who) + ": rect outside matrix");
  if (r.i1 > r.i2 || r.j1 > r.j2)
    throw bad_param(std::string(who) + ": rect corners out of order");
}

/// Decides whether a monotone path may take the diagonal step
/// (i-1,j-1) -> (i,j). The production rule requires both endpoints to be
/// zero-entries; tests inject broken rules here to prove the structural
/// checks downstream can actually catch a wrong DP.
using diag_step_rule = bool (*)(const bit_matrix&, int i, int j);

inline bool diagonal_joins_zeros(const bit_matrix& mat, int i, int j) {
  return mat.at(i, j) == 0 && mat.at(i - 1, j - 1) == 0;
}

/// Minimum-cost path from (r.i1, r.j1) to (r.i2, r.j2) whose diagonal steps
/// are constrained by `rule` (default: both endpoints zero). Cost counts the
/// one-entries visited, both corners included. Reconstruction prefers the
/// diagonal predecessor, then (i-1,j), then (i,j-1), so the returned path is
/// deterministic. Memory O(area of the rect): small inputs only.
inline cost_path min_cost_diag_restricted_path(
    const bit_matrix& mat, const cell_rect& r,
    diag_step_rule rule = diagonal_joins_zeros) {
  check_rect(mat, r, "min_cost_diag_restricted_path");
  int w = r.j2 - r.j1 + 1;
  auto idx = [&](int i, int j) {
    return static_cast<std::size_t>(i - r.i1) * static_cast<std::size_t>(w) +
           static_cast<std::size_t>(j - r.j1);
  };
  std::vector<long long> dp(static_cast<std::size_t>(r.i2 - r.i1 + 1) *
                            static_cast<std::size_t>(w));
  for (int i = r.i1; i <= r.i2; ++i)
    for (int j = r.j1; j <= r.j2; ++j) {
      long long c = mat.at(i, j);
      long long best = detail::kInf;
      if (i == r.i1 && j == r.j1) best = 0;
      if (i > r.i1 && j > r.j1 && rule(mat, i, j))
        best = std::min(best, dp[idx(i - 1, j - 1)]);
      if (i > r.i1) best = std::min(best, dp[idx(i - 1, j)]);
      if (j > r.j1) best = std::min(best, dp[idx(i, j - 1)]);
      dp[idx(i, j)] = best + c;
    }
  cost_path out;
  out.cost = dp[idx(r.i2, r.j2)];
  int i = r.i2, j = r.j2;
  out.cells.emplace_back(i, j);
  while (i > r.i1 || j > r.j1) {
    long long need = dp[idx(i, j)] - mat.at(i, j);
    if (i > r.i1 && j > r.j1 && rule(mat, i, j) &&
        dp[idx(i - 1, j - 1)] == need) {
      --i; --j;
    } else if (i > r.i1 && dp[idx(i - 1, j)] == need) {
      --i;
    } else {
      --j;
    }
    out.cells.emplace_back(i, j);
  }
  std::reverse(out.cells.begin(), out.cells.end());
  return out;
}

/// Number of zero-entries a path visits.
inline long long path_zero_count(const bit_matrix& mat, const cost_path& p) {
  long long z = 0;
  for (auto [i, j] : p.cells)
    if (mat.at(i, j) == 0) ++z;
  return z;
}

// ---------------------------------------------------------------------------
// Locality.

/// Exact locality of the zero set: the smallest t such that every pair of
/// zeros (i1,j1), (i2,j2) satisfies |i1-i2| <= t*(2+|j1-j2|) and
/// |j1-j2| <= t*(2+|i1-i2|). Equivalently the max over zero pairs of
/// max(|di|/(2+|dj|), |dj|/(2+|di|)). By convention 0 when the matrix has
/// fewer than two zeros.
///
/// This version runs in O(n^2 + m^2) using per-slice extremes: for a fixed
/// pair of columns the largest |dj| over their zeros is attained at the
/// extremes (and symmetrically for rows), and the binding pair for each of
/// the two inequalities always has both members in some slice pair.
inline double exact_locality(const free_space_data& d) {
  int n = d.n_cols(), m = d.n_rows();
  struct ext { std::int32_t lo, hi; bool any; };
  std::vector<ext> cols(static_cast<std::size_t>(n)),
      rows(static_cast<std::size_t>(m));
  std::size_t zeros = 0;
  for (int i = 1; i <= n; ++i) {
    zero_list z = d.column(i);
    zeros += z.size();
    cols[static_cast<std::size_t>(i - 1)] =
        z.empty() ? ext{0, 0, false} : ext{z.front(), z.back(), true};
  }
  if (zeros < 2) return 0.0;
  for (int j = 1; j <= m; ++j) {
    zero_list z = d.row(j);
    rows[static_cast<std::size_t>(j - 1)] =
        z.empty() ? ext{0, 0, false} : ext{z.front(), z.back(), true};
  }
  double best = 0.0;
  auto scan = [&best](const std::vector<ext>& e) {
    int count = static_cast<int>(e.size());
    for (int a = 0; a < count; ++a) {
      if (!e[static_cast<std::size_t>(a)].any) continue;
      for (int b = a; b < count; ++b) {
        if (!e[static_cast<std::size_t>(b)].any) continue;
        long long spread = std::max<long long>(
            e[static_cast<std::size_t>(b)].hi - e[static_cast<std::size_t>(a)].lo,
            e[static_cast<std::size_t>(a)].hi - e[static_cast<std::size_t>(b)].lo);
        if (spread <= 0) continue;
        double r = static_cast<double>(spread) / (2.0 + (b - a));
        if (r > best) best = r;
      }
    }
  };
  scan(cols);  // |dj| / (2 + |di|) over column pairs
  scan(rows);  // |di| / (2 + |dj|) over row pairs
  return best;
}

inline double exact_locality(const bit_matrix& mat) {
  return exact_locality(free_space_data::from_matrix(mat));
}

/// Literal O(z^2) evaluation of the same definition, for cross-checking the
/// extremes-based version on small inputs.
inline double exact_locality_brute(const bit_matrix& mat) {
  std::vector<std::pair<int, int>> zs;
  for (int i = 1; i <= mat.n; ++i)
    for (int j = 1; j <= mat.m; ++j)
      if (mat.at(i, j) == 0) zs.emplace_back(i, j);
  double best = 0.0;
  for (std::size_t a = 0; a < zs.size(); ++a)
    for (std::size_t b = a + 1; b < zs.size(); ++b) {
      double di = std::abs(zs[a].first - zs[b].first);
      double dj = std::abs(zs[a].second - zs[b].second);
      best = std::max({best, di / (2.0 + dj), dj / (2.0 + di)});
    }
  return best;
}

/// Exhaustive list of everything that violates t-locality.
struct locality_census {
  double t = 0.0;      ///< threshold the census was taken at
  double t_min = 0.0;  ///< smallest threshold all zero pairs would pass
  struct pair_failure {
    int i1, j1, i2, j2;  ///< the two zero entries
    bool col_fail;       ///< |j1-j2| > t*(2+|i1-i2|)  (column-pair violation)
    bool row_fail;       ///< |i1-i2| > t*(2+|j1-j2|)  (row-pair violation)
  };
  std::vector<pair_failure> pair_failures;
  /// Slices failing the second-order condition: own zero spread > 2t, or a
  /// crossing slice through one of their zeros has spread > 2t.
  std::vector<int> second_order_cols, second_order_rows;

  bool clean() const {
    return pair_failures.empty() && second_order_cols.empty() &&
           second_order_rows.empty();
  }
};

inline locality_census take_locality_census(const bit_matrix& mat, double t) {
  if (!(t >= 0.0)) throw bad_param("take_locality_census: need t >= 0");
  locality_census c;
  c.t = t;
  std::vector<std::pair<int, int>> zs;
  for (int i = 1; i <= mat.n; ++i)
    for (int j = 1; j <= mat.m; ++j)
      if (mat.at(i, j) == 0) zs.emplace_back(i, j);
  for (std::size_t a = 0; a < zs.size(); ++a)
    for (std::size_t b = a + 1; b < zs.size(); ++b) {
      double di = std::abs(zs[a].first - zs[b].first);
      double dj = std::abs(zs[a].second - zs[b].second);
      c.t_min = std::max({c.t_min, di / (2.0 + dj), dj / (2.0 + di)});
      bool col_fail = dj > t * (2.0 + di);
      bool row_fail = di > t * (2.0 + dj);
      if (col_fail || row_fail)
        c.pair_failures.push_back({zs[a].first, zs[a].second, zs[b].first,
                                   zs[b].second, col_fail, row_fail});
    }
  free_space_data d = free_space_data::from_matrix(mat);
  auto spread = [](zero_list z) -> long long {
    return z.empty() ? 0 : z.back() - z.front();
  };
  for (int i = 1; i <= mat.n; ++i) {
    zero_list z = d.column(i);
    bool bad = spread(z) > 2.0 * t;
    for (std::int32_t j : z) {
      if (bad) break;
      bad = spread(d.row(j)) > 2.0 * t;
    }
    if (bad) c.second_order_cols.push_back(i);
  }
  for (int j = 1; j <= mat.m; ++j) {
    zero_list z = d.row(j);
    bool bad = spread(z) > 2.0 * t;
    for (std::int32_t i : z) {
      if (bad) break;
      bad = spread(d.column(i)) > 2.0 * t;
    }
    if (bad) c.second_order_rows.push_back(j);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Permeability, barriers, layers.

/// Ground-truth permeability of the block of slices [lo, hi] on the given
/// axis: true iff some monotone path of zero entries (steps (+1,0), (0,+1),
/// (+1,+1)) leads from a zero in slice lo to a zero in slice hi.
inline bool brute_permeable(const bit_matrix& mat, axis a, int lo, int hi) {
  int across = (a == axis::columns) ? mat.n : mat.m;  // slice index range
  int along = (a == axis::columns) ? mat.m : mat.n;   // positions in a slice
  if (lo < 1 || hi > across || lo > hi)
    throw index_out_of_range("brute_permeable: bad block");
  auto is_zero = [&](int s, int p) {
    return (a == axis::columns ? mat.at(s, p) : mat.at(p, s)) == 0;
  };
  std::vector<char> prev(static_cast<std::size_t>(along) + 1, 0),
      cur(static_cast<std::size_t>(along) + 1, 0);
  for (int s = lo; s <= hi; ++s) {
    for (int p = 1; p <= along; ++p) {
      char r = 0;
      if (is_zero(s, p)) {
        if (s == lo) r = 1;
        if (!r && prev[static_cast<std::size_t>(p)]) r = 1;          // (+1, 0)
        if (!r && p > 1 && prev[static_cast<std::size_t>(p - 1)]) r = 1;  // diag
        if (!r && p > 1 && cur[static_cast<std::size_t>(p - 1)]) r = 1;   // (0,+1)
      }
      cur[static_cast<std::size_t>(p)] = r;
    }
    std::swap(prev, cur);
  }
  for (int p = 1; p <= along; ++p)
    if (prev[static_cast<std::size_t>(p)]) return true;
  return false;
}

/// (#all-one columns, #all-one rows).
inline std::pair<int, int> count_barriers(const bit_matrix& mat) {
  int bc = 0, br = 0;
  std::vector<char> row_has(static_cast<std::size_t>(mat.m) + 1, 0);
  for (int i = 1; i <= mat.n; ++i) {
    bool any = false;
    for (int j = 1; j <= mat.m; ++j)
      if (mat.at(i, j) == 0) {
        any = true;
        row_has[static_cast<std::size_t>(j)] = 1;
      }
    if (!any) ++bc;
  }
  for (int j = 1; j <= mat.m; ++j)
    if (!row_has[static_cast<std::size_t>(j)]) ++br;
  return {bc, br};
}

/// Number of layers of the zero set inside the rect under the dominance
/// order (i,j) >= (i',j') iff i >= i' and j >= j': repeatedly remove the
/// minimal zeros (those dominating no other remaining zero) and count
/// rounds. Equals the longest dominance chain of zeros in the rect. Both
/// rect corners must be zero-entries.
inline int layer_count(const bit_matrix& mat, const cell_rect& r) {
  check_rect(mat, r, "layer_count");
  if (mat.at(r.i1, r.j1) != 0 || mat.at(r.i2, r.j2) != 0)
    throw not_zero_corners("layer_count: rect corners must be zero-entries");
  std::vector<std::pair<int, int>> zs;
  for (int i = r.i1; i <= r.i2; ++i)
    for (int j = r.j1; j <= r.j2; ++j)
      if (mat.at(i, j) == 0) zs.emplace_back(i, j);
  int layers = 0;
  std::vector<char> gone(zs.size(), 0);
  std::size_t left = zs.size();
  while (left > 0) {
    ++layers;
    std::vector<std::size_t> peel;
    for (std::size_t a = 0; a < zs.size(); ++a) {
      if (gone[a]) continue;
      bool minimal = true;
      for (std::size_t b = 0; b < zs.size() && minimal; ++b) {
        if (gone[b] || b == a) continue;
        if (zs[b].first <= zs[a].first && zs[b].second <= zs[a].second)
          minimal = false;  // a dominates b, so a is not minimal
      }
      if (minimal) peel.push_back(a);
    }
    for (std::size_t a : peel) gone[a] = 1;
    left -= peel.size();
  }
  return layers;
}

/// Slices whose removal makes the rest of the matrix pass all t-locality
/// checks, found greedily: every slice involved in any census failure is
/// removed. None when a boundary slice (first/last column or row) would have
/// to go — then the matrix is not strongly local by this witness.
struct strong_witness {
  std::vector<int> cols_removed, rows_removed;
  double zeta = 0.0;  ///< removed slice count / n (square-matrix convention)
};

inline std::optional<strong_witness> greedy_strong_witness(
    const bit_matrix& mat, double t) {
  locality_census c = take_locality_census(mat, t);
  std::vector<char> col_gone(static_cast<std::size_t>(mat.n) + 1, 0),
      row_gone(static_cast<std::size_t>(mat.m) + 1, 0);
  for (const auto& f : c.pair_failures) {
    if (f.col_fail) {
      col_gone[static_cast<std::size_t>(f.i1)] = 1;
      col_gone[static_cast<std::size_t>(f.i2)] = 1;
    }
    if (f.row_fail) {
      row_gone[static_cast<std::size_t>(f.j1)] = 1;
      row_gone[static_cast<std::size_t>(f.j2)] = 1;
    }
  }
  for (int i : c.second_order_cols) col_gone[static_cast<std::size_t>(i)] = 1;
  for (int j : c.second_order_rows) row_gone[static_cast<std::size_t>(j)] = 1;
  if (col_gone[1] || col_gone[static_cast<std::size_t>(mat.n)] || row_gone[1] ||
      row_gone[static_cast<std::size_t>(mat.m)])
    return std::nullopt;
  strong_witness w;
  for (int i = 1; i <= mat.n; ++i)
    if (col_gone[static_cast<std::size_t>(i)]) w.cols_removed.push_back(i);
  for (int j = 1; j <= mat.m; ++j)
    if (row_gone[static_cast<std::size_t>(j)]) w.rows_removed.push_back(j);
  w.zeta = static_cast<double>(w.cols_removed.size() + w.rows_removed.size()) /
           static_cast<double>(mat.n);
  return w;
}

}  // namespace fsprobe::reference
