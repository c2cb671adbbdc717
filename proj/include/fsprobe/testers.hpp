#pragma once

// Sublinear property testers over the free-space query oracle.
//
// All routines in this header touch the matrix only through query_oracle and
// account one unit per column/row query. Verdicts are one-sided: "yes" can be
// wrong (with bounded probability on far inputs), "no" never is — every "no"
// carries a witness that can be re-checked independently.

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fsprobe/errors.hpp"
#include "fsprobe/freespace.hpp"
#include "fsprobe/geometry.hpp"
#include "fsprobe/rng.hpp"

namespace fsprobe {

// ---------------------------------------------------------------------------
// Verdicts and witnesses.

/// The corner entry (i, i) of the matrix is a one (both are mandatory zeros
/// for closeness).
struct witness_corner_one {
  int i = 0, j = 0;
};

/// Slice `index` on `ax` has no zero entry at all.
struct witness_barrier {
  axis ax = axis::columns;
  int index = 0;
};

/// The block of slices [lo, hi] on `ax` admits no zero path from its first
/// slice to its last.
struct witness_impermeable_block {
  axis ax = axis::columns;
  int lo = 0, hi = 0;
};

/// A t-locality check failed: for i1 == i2 the second-order check of slice i1
/// on `ax`, otherwise the pairwise check of slices i1 and i2 on `ax`.
struct witness_locality_breach {
  axis ax = axis::columns;
  int i1 = 0, i2 = 0;
  long long t = 0;
};

using witness = std::variant<witness_corner_one, witness_barrier,
                             witness_impermeable_block,
                             witness_locality_breach>;

/// Outcome of one tester run. answer_yes == false implies wit is set.
struct verdict {
  bool answer_yes = true;
  std::optional<witness> wit;
  std::uint64_t queries_used = 0;

  static verdict accept(std::uint64_t queries) { return {true, {}, queries}; }
  static verdict reject(witness w, std::uint64_t queries) {
    return {false, std::move(w), queries};
  }
};

namespace detail {

inline long long ceil_log2(long long n) {
  // smallest s with 2^s >= n (n >= 1)
  return n <= 1 ? 0 : std::bit_width(static_cast<std::uint64_t>(n - 1));
}

inline long long floor_log2(long long n) {
  return std::bit_width(static_cast<std::uint64_t>(n)) - 1;  // n >= 1
}

inline long long ceil_ll(double x) {
  return static_cast<long long>(std::ceil(x));
}

inline bool contains(zero_list z, std::int32_t v) {
  // z is sorted; it is typically tiny, but stay logarithmic anyway.
  std::size_t lo = 0, hi = z.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (z[mid] < v) lo = mid + 1;
    else hi = mid;
  }
  return lo < z.size() && z[lo] == v;
}

inline zero_list query_slice(query_oracle& o, axis a, int s) {
  return a == axis::columns ? o.query_column(s) : o.query_row(s);
}

inline void require_square(const query_oracle& o, const char* who) {
  if (o.n_cols() != o.n_rows())
    throw non_square(std::string(who) + ": matrix must be square");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Primitive probes.

/// True iff slice `index` on `ax` has no zero entry. Exactly one query.
inline bool is_barrier(query_oracle& o, axis ax, int index) {
  return detail::query_slice(o, ax, index).empty();
}

/// True iff a monotone path of zero entries (slice+1 / position+1 /
/// both, never decreasing) connects some zero of slice lo to some zero of
/// slice hi within the block [lo, hi] on `ax`. Costs exactly hi-lo+1 queries
/// (every slice of the block is queried once, even after reachability has
/// already died, so the cost is deterministic).
inline bool permeable(query_oracle& o, axis ax, int lo, int hi) {
  int limit = ax == axis::columns ? o.n_cols() : o.n_rows();
  if (lo < 1 || hi > limit || lo > hi)
    throw index_out_of_range("permeable: bad block [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "]");
  std::vector<std::int32_t> prev, reach;
  for (int s = lo; s <= hi; ++s) {
    zero_list z = detail::query_slice(o, ax, s);
    if (s == lo) {
      prev.assign(z.begin(), z.end());
      continue;
    }
    reach.clear();
    std::size_t pi = 0;
    bool run_reachable = false;
    for (std::size_t k = 0; k < z.size(); ++k) {
      std::int32_t v = z[k];
      if (k == 0 || z[k - 1] != v - 1) run_reachable = false;  // new run
      while (pi < prev.size() && prev[pi] < v - 1) ++pi;
      if (pi < prev.size() && (prev[pi] == v - 1 || prev[pi] == v))
        run_reachable = true;  // horizontal or diagonal entry into the run
      if (run_reachable) reach.push_back(v);  // vertical closure within run
    }
    std::swap(prev, reach);
  }
  return !prev.empty();
}

// ---------------------------------------------------------------------------
// Interval sampling for the block stage.

/// Multiscale random block sample. For each level i = 0 .. floor(log2(ell)),
/// draws ceil(4*c*n / (2^{i+1} * K)) distinct indices j from
/// {0, 1, ..., floor(n / 2^{i+1}) - 2} (all of them when fewer are available)
/// and emits the interval [j * 2^{i+1}, (j+2) * 2^{i+1}] clamped to [1, n].
/// Every sub-block of length <= ell whose slices matter is covered by some
/// emitted interval of comparable length with constant probability per draw.
///
/// Returns nullopt (degenerate range) when K <= 0 or any level's index
/// population is empty; callers fall back to one exhaustive scan.
inline std::optional<std::vector<std::pair<int, int>>> sample_intervals(
    long long n, long long K, long long ell, long long c, rng& rand) {
  if (n < 1 || ell < 1 || c < 1)
    throw bad_param("sample_intervals: need n >= 1, ell >= 1, c >= 1");
  if (K <= 0) return std::nullopt;
  std::vector<std::pair<int, int>> out;
  long long top = detail::floor_log2(ell);
  for (long long i = 0; i <= top; ++i) {
    long long w = 1LL << (i + 1);
    long long pop = n / w - 1;  // candidates 0 .. pop-1
    if (pop <= 0) return std::nullopt;
    long long want = (4 * c * n + w * K - 1) / (w * K);  // ceil(4cn / (w K))
    want = std::min(want, pop);
    for (long long j : rand.sample_distinct(pop, want)) {
      long long lo = std::max(1LL, j * w);
      long long hi = std::min(n, (j + 2) * w);
      out.emplace_back(static_cast<int>(lo), static_cast<int>(hi));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closeness tester with a known locality bound.

/// Parameters of frechet_tester1. k < 0 means "use the default 24*t/eps".
struct tester1_params {
  long long t = 1;  ///< locality bound of the input matrix
  double eps = 0.5; ///< farness parameter, in (0, 2)
  double k = -1.0;  ///< probe-stage repetitions (rounded up); default 24*t/eps
  long long c = 4;  ///< interval-stage oversampling constant
};

/// Optional instrumentation filled by frechet_tester1.
struct tester1_trace {
  long long iterations = 0;   ///< probe-stage repetitions actually configured
  long long K = 0;            ///< interval-stage scale parameter
  long long ell = 0;          ///< longest block length the sampler must cover
  bool degenerate = false;    ///< true when the fallback full scan was used
  long long intervals = 0;    ///< sampled intervals (1 when degenerate)
};

/// One-sided closeness tester for square matrices whose zero set is t-local.
/// Always answers yes when a zero-cost coupling path exists. When no coupling
/// path of cost <= eps*n exists (the matrix is (eps, delta)-far), answers no
/// with probability >= 4/5 at the default k and c.
///
/// Stages: (1) both corner entries must be zero; (2) ceil(k) uniform indices
/// are probed for barrier rows/columns; (3) a multiscale sample of blocks
/// must each be permeable as a column block and as a row block.
inline verdict frechet_tester1(query_oracle& o, const tester1_params& p,
                               rng& rand, tester1_trace* trace = nullptr) {
  detail::require_square(o, "frechet_tester1");
  if (p.t < 1) throw bad_param("frechet_tester1: need t >= 1");
  if (!(p.eps > 0.0) || !(p.eps < 2.0))
    throw bad_param("frechet_tester1: need 0 < eps < 2");
  if (!(p.c > 0.0)) throw bad_param("frechet_tester1: need c > 0");
  double k = p.k < 0.0 ? 24.0 * static_cast<double>(p.t) / p.eps : p.k;
  if (!(k > 0.0)) throw bad_param("frechet_tester1: need k > 0");

  const int n = o.n_cols();
  const std::uint64_t start = o.query_count();
  const long long iters = detail::ceil_ll(k);
  long long interval_budget = 0;  // sum of 2*(|J|+1) over processed blocks
  auto used = [&] { return o.query_count() - start; };
  auto check_budget = [&] {
    std::uint64_t cap = 2 + 2 * static_cast<std::uint64_t>(iters) +
                        static_cast<std::uint64_t>(interval_budget);
    if (used() > cap)
      throw std::logic_error("frechet_tester1: query accounting violated");
  };
  if (trace) *trace = tester1_trace{};
  if (trace) trace->iterations = iters;

  // Stage 1: corners. One column query each, membership tested locally.
  if (!detail::contains(o.query_column(1), 1))
    return verdict::reject(witness_corner_one{1, 1}, used());
  if (!detail::contains(o.query_column(n), static_cast<std::int32_t>(n)))
    return verdict::reject(witness_corner_one{n, n}, used());

  // Stage 2: barrier probes.
  for (long long it = 0; it < iters; ++it) {
    int j = static_cast<int>(rand.uniform_int(1, n));
    if (o.query_row(j).empty())
      return verdict::reject(witness_barrier{axis::rows, j}, used());
    if (o.query_column(j).empty())
      return verdict::reject(witness_barrier{axis::columns, j}, used());
  }

  // Stage 3: permeability of sampled blocks.
  long long K = detail::ceil_ll(p.eps * static_cast<double>(n) /
                                (32.0 * static_cast<double>(p.t))) -
                1;
  long long ell = detail::ceil_ll(128.0 * static_cast<double>(p.t) / p.eps);
  if (trace) {
    trace->K = K;
    trace->ell = ell;
  }
  auto blocks = sample_intervals(n, K, ell, p.c, rand);
  if (!blocks) {
    blocks.emplace();
    blocks->emplace_back(1, n);  // degenerate range: one exhaustive scan
    if (trace) trace->degenerate = true;
  }
  if (trace) trace->intervals = static_cast<long long>(blocks->size());
  for (auto [lo, hi] : *blocks) {
    interval_budget += 2 * ((hi - lo) + 1);
    if (!permeable(o, axis::columns, lo, hi))
      return verdict::reject(witness_impermeable_block{axis::columns, lo, hi},
                             used());
    if (!permeable(o, axis::rows, lo, hi))
      return verdict::reject(witness_impermeable_block{axis::rows, lo, hi},
                             used());
  }
  check_budget();
  return verdict::accept(used());
}

// ---------------------------------------------------------------------------
// Locality testing.

/// Pairwise t-locality of two columns, from their zero extremes: passes iff
/// every zero of column i1 and every zero of column i2 are within
/// t*(2 + |i1-i2|) rows of each other. Vacuously true when either column has
/// no zeros. Exactly two queries.
inline bool columns_pass(query_oracle& o, int i1, int i2, long long t) {
  zero_list a = o.query_column(i1);
  bool a_empty = a.empty();
  std::int32_t alo = a_empty ? 0 : a.front(), ahi = a_empty ? 0 : a.back();
  zero_list b = o.query_column(i2);
  if (a_empty || b.empty()) return true;
  long long spread = std::max<long long>(b.back() - alo, ahi - b.front());
  return spread <= t * (2 + std::abs(i1 - i2));
}

/// Row-pair analogue of columns_pass. Exactly two queries.
inline bool rows_pass(query_oracle& o, int j1, int j2, long long t) {
  zero_list a = o.query_row(j1);
  bool a_empty = a.empty();
  std::int32_t alo = a_empty ? 0 : a.front(), ahi = a_empty ? 0 : a.back();
  zero_list b = o.query_row(j2);
  if (a_empty || b.empty()) return true;
  long long spread = std::max<long long>(b.back() - alo, ahi - b.front());
  return spread <= t * (2 + std::abs(j1 - j2));
}

/// Second-order t-locality of slice i on `ax`: its own zeros span at most 2t
/// positions, and every crossing slice through one of its zeros spans at most
/// 2t as well. At most 2t+2 queries (one for the slice, one per zero, and a
/// slice whose own spread passes has at most 2t+1 zeros).
inline bool second_order_passes(query_oracle& o, axis ax, int i, long long t) {
  zero_list own = detail::query_slice(o, ax, i);
  if (own.empty()) return true;
  if (static_cast<long long>(own.back()) - own.front() > 2 * t) return false;
  axis cross = ax == axis::columns ? axis::rows : axis::columns;
  for (std::int32_t v : own) {
    zero_list slice = detail::query_slice(o, cross, v);
    if (!slice.empty() &&
        static_cast<long long>(slice.back()) - slice.front() > 2 * t)
      return false;
  }
  return true;
}

/// Ancestors of leaf i on the root-to-i search path of the implicit balanced
/// BST over [1, n] (root = midpoint, halving ranges), excluding i itself, in
/// root-first order. At most ceil(log2(n)) nodes. Calls fn(j) for each.
template <typename Fn>
inline void for_each_bst_ancestor(int n, int i, Fn&& fn) {
  int lo = 1, hi = n;
  while (lo <= hi) {
    int mid = lo + (hi - lo) / 2;
    if (mid == i) return;
    fn(mid);
    if (i < mid) hi = mid - 1;
    else lo = mid + 1;
  }
}

/// One-sided tester for t-locality of a square matrix's zero set. Never
/// answers no on a t-local matrix. If no witness set keeping the boundary
/// slices and at most sigma*n removed slices can make the matrix pass all
/// pairwise and second-order checks (it is not even "strongly" close to
/// t-local), answers no with constant probability per iteration batch.
///
/// Runs ceil(3/sigma) + 2 iterations; the first two test the boundary slices
/// 1 and n, the rest uniform interior indices (interior means [2, n-1],
/// clamped to [1, n] when n <= 2). Each iteration second-order-checks column
/// and row i and pair-checks i against every BST ancestor of i.
///
/// Query bound, checked on every run including early exits:
///   (ceil(3/sigma) + 2) * (2*(2t+2) + 4*ceil(log2 n)).
inline verdict locality_tester(query_oracle& o, double sigma, long long t,
                               rng& rand) {
  detail::require_square(o, "locality_tester");
  if (!(sigma > 0.0)) throw bad_param("locality_tester: need sigma > 0");
  if (t < 1) throw bad_param("locality_tester: need t >= 1");
  const int n = o.n_cols();
  const std::uint64_t start = o.query_count();
  const long long iters = detail::ceil_ll(3.0 / sigma) + 2;
  const std::uint64_t cap =
      static_cast<std::uint64_t>(iters) *
      (2 * (2 * static_cast<std::uint64_t>(t) + 2) +
       4 * static_cast<std::uint64_t>(detail::ceil_log2(n)));
  auto finish = [&](verdict v) {
    if (v.queries_used > cap)
      throw std::logic_error("locality_tester: query bound exceeded");
    return v;
  };
  auto used = [&] { return o.query_count() - start; };

  for (long long it = 0; it < iters; ++it) {
    int i;
    if (it == 0) i = 1;
    else if (it == 1) i = n;
    else if (n >= 3) i = static_cast<int>(rand.uniform_int(2, n - 1));
    else i = static_cast<int>(rand.uniform_int(1, n));

    if (!second_order_passes(o, axis::columns, i, t))
      return finish(verdict::reject(
          witness_locality_breach{axis::columns, i, i, t}, used()));
    if (!second_order_passes(o, axis::rows, i, t))
      return finish(verdict::reject(
          witness_locality_breach{axis::rows, i, i, t}, used()));

    bool rejected = false;
    verdict out = verdict::accept(0);
    for_each_bst_ancestor(n, i, [&](int j) {
      if (rejected) return;
      if (!columns_pass(o, i, j, t)) {
        out = verdict::reject(witness_locality_breach{axis::columns, i, j, t},
                              used());
        rejected = true;
        return;
      }
      if (!rows_pass(o, i, j, t)) {
        out = verdict::reject(witness_locality_breach{axis::rows, i, j, t},
                              used());
        rejected = true;
      }
    });
    if (rejected) return finish(out);
  }
  return finish(verdict::accept(used()));
}

/// Geometric search for a locality bound: for rounds i = 1, 2, ... runs
/// locality_tester with t = 2^i and sigma = zeta / 2^{2(i+1)}, repeated
/// 2 times in round 1 and ceil(2*(1 + log2 i)) times after; returns t = 2^{i+1}
/// for the first round whose runs all answered yes. Deterministically at most
/// 4 * ceil(exact locality) for any zeta, because rounds at or above the true
/// locality can never fail; always a power of two, at least 4.
inline long long estimate_locality(query_oracle& o, double zeta, rng& rand) {
  detail::require_square(o, "estimate_locality");
  if (!(zeta > 0.0)) throw bad_param("estimate_locality: need zeta > 0");
  for (int i = 1; i < 62; ++i) {
    double sigma = zeta / std::exp2(2.0 * (i + 1));
    long long reps =
        i == 1 ? 2 : detail::ceil_ll(2.0 * (1.0 + std::log2(static_cast<double>(i))));
    bool all_yes = true;
    for (long long r = 0; r < reps && all_yes; ++r)
      all_yes = locality_tester(o, sigma, 1LL << i, rand).answer_yes;
    if (all_yes) return 1LL << (i + 1);
  }
  throw std::logic_error("estimate_locality: no locality bound found");
}

/// Optional instrumentation filled by frechet_tester2.
struct tester2_trace {
  long long t = 0;  ///< locality bound chosen by estimate_locality
  tester1_trace inner;
};

/// One-sided closeness tester that needs no locality bound: estimates one
/// with estimate_locality (zeta = eps/1600), then runs frechet_tester1 with
/// eps/3, k = 4800*t^2/eps and c = 2.
inline verdict frechet_tester2(query_oracle& o, double eps, rng& rand,
                               tester2_trace* trace = nullptr) {
  detail::require_square(o, "frechet_tester2");
  if (!(eps > 0.0) || !(eps < 2.0))
    throw bad_param("frechet_tester2: need 0 < eps < 2");
  const std::uint64_t start = o.query_count();
  long long t = estimate_locality(o, eps / 1600.0, rand);
  if (trace) trace->t = t;
  tester1_params p;
  p.t = t;
  p.eps = eps / 3.0;
  p.k = 4800.0 * static_cast<double>(t) * static_cast<double>(t) / eps;
  p.c = 2;
  verdict v = frechet_tester1(o, p, rand, trace ? &trace->inner : nullptr);
  v.queries_used = o.query_count() - start;  // include the estimation queries
  return v;
}

// ---------------------------------------------------------------------------
// Hausdorff-style testers.

/// One-sided tester for "no barrier slices" (equivalently: the Hausdorff
/// distance of the generating curves is within the matrix threshold).
/// Rectangular matrices allowed. Samples ceil(2/eps) columns and ceil(2/eps)
/// rows uniformly with replacement, queries them all (the query count is
/// exactly 2*ceil(2/eps), deterministically), then rejects iff a sampled
/// slice was empty. When at least eps*(n+m) slices are barriers, rejects with
/// probability >= 1 - e^{-2} per axis carrying its share.
inline verdict hausdorff_tester(query_oracle& o, double eps, rng& rand) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw bad_param("hausdorff_tester: need 0 < eps < 1");
  const int n = o.n_cols(), m = o.n_rows();
  const std::uint64_t start = o.query_count();
  const long long s = detail::ceil_ll(2.0 / eps);
  std::vector<int> cols(static_cast<std::size_t>(s)),
      rows(static_cast<std::size_t>(s));
  for (long long k = 0; k < s; ++k)
    cols[static_cast<std::size_t>(k)] =
        static_cast<int>(rand.uniform_int(1, n));
  for (long long k = 0; k < s; ++k)
    rows[static_cast<std::size_t>(k)] =
        static_cast<int>(rand.uniform_int(1, m));
  int bad_col = 0, bad_row = 0;
  for (int i : cols)
    if (o.query_column(i).empty() && bad_col == 0) bad_col = i;
  for (int j : rows)
    if (o.query_row(j).empty() && bad_row == 0) bad_row = j;
  std::uint64_t used = o.query_count() - start;
  if (used != 2 * static_cast<std::uint64_t>(s))
    throw std::logic_error("hausdorff_tester: query count not deterministic");
  if (bad_col != 0)
    return verdict::reject(witness_barrier{axis::columns, bad_col}, used);
  if (bad_row != 0)
    return verdict::reject(witness_barrier{axis::rows, bad_row}, used);
  return verdict::accept(used);
}

/// Crude closeness tester for kappa-straight inputs: runs hausdorff_tester at
/// eps/(8t). Exactly 2*ceil(2/(eps/(8t))) queries. Its closeness soundness
/// leans on the generating curves satisfying the usual preconditions (edges
/// within delta, endpoints within delta, O(kappa)-local matrix), under which
/// the discrete Frechet distance is at most (1.5*kappa + 2.5) times the
/// Hausdorff distance; callers are responsible for those preconditions.
inline verdict approx_frechet_tester(query_oracle& o, double eps, long long t,
                                     rng& rand) {
  if (t < 1) throw bad_param("approx_frechet_tester: need t >= 1");
  if (!(eps > 0.0)) throw bad_param("approx_frechet_tester: need eps > 0");
  double eps_h = eps / (8.0 * static_cast<double>(t));
  const std::uint64_t start = o.query_count();
  verdict v = hausdorff_tester(o, eps_h, rand);
  std::uint64_t expect =
      2 * static_cast<std::uint64_t>(detail::ceil_ll(2.0 / eps_h));
  if (o.query_count() - start != expect)
    throw std::logic_error("approx_frechet_tester: query count drifted");
  return v;
}

// ---------------------------------------------------------------------------
// Reduction-based tester on curves.

/// Which closeness tester a curve-level driver should run, and with what
/// locality knowledge.
struct tester_mode {
  bool oblivious = true;  ///< true: frechet_tester2; false: frechet_tester1
  long long t = 1;        ///< locality bound of the *unreduced* matrix
  double gamma = 1.0;     ///< edge-length lower-bound factor: edges >= alpha/gamma
};

/// Locality bound carried to the reduced matrix: ceil(4*gamma*t/eps_prime).
inline long long reduced_locality_bound(long long t, double gamma,
                                        double eps_prime) {
  if (t < 1 || !(gamma > 0.0) || !(eps_prime > 0.0))
    throw bad_param("reduced_locality_bound: bad parameters");
  return detail::ceil_ll(4.0 * gamma * static_cast<double>(t) / eps_prime);
}

/// Closeness tester that first sparsifies the matrix by the stride
/// beta = max(1, floor(eps_prime*delta/(2*alpha))), where alpha is the
/// longest edge length of P and Q, then tests the reduced matrix. A yes means
/// the curves are within (1+eps_prime)*delta in discrete Frechet distance; a
/// no (on suitable straight inputs) means they are beyond (1-eps_prime)*delta.
/// With beta == 1 the behaviour is query-for-query identical to running the
/// unreduced tester on the same seed.
inline verdict reduced_frechet_tester(const curve& p, const curve& q,
                                      double delta, double eps,
                                      double eps_prime, double alpha,
                                      const tester_mode& mode, rng& rand,
                                      tester2_trace* trace = nullptr) {
  long long beta = compute_beta(eps_prime, delta, alpha);
  free_space_oracle inner(p, q, delta);
  reduced_oracle red(inner, beta);
  if (mode.oblivious) return frechet_tester2(red, eps, rand, trace);
  tester1_params params;
  params.t = reduced_locality_bound(mode.t, mode.gamma, eps_prime);
  params.eps = eps;
  verdict v = frechet_tester1(red, params, rand, trace ? &trace->inner : nullptr);
  if (trace) trace->t = params.t;
  return v;
}

// ---------------------------------------------------------------------------
// Continuous adapter.

/// Instrumentation of the continuous adapter's derived parameters.
struct continuous_trace {
  double eps2 = 0.0;         ///< eps_prime / 4
  double step = 0.0;         ///< subsampling arc-length step a = eps2 * delta
  double delta_prime = 0.0;  ///< (1 + 2*eps2) * delta
  long long p_vertices = 0, q_vertices = 0;
  long long t = 0;           ///< locality bound used (0 when oblivious)
};

/// Continuous Frechet closeness tester: subsamples both curves at arc-length
/// step a = (eps_prime/4)*delta, builds the free-space oracle of the samples
/// at delta' = (1 + eps_prime/2)*delta, and runs the chosen discrete tester
/// at farness eps/12. Requires 0 < eps < 1 and arc lengths equal to within
/// 1e-9 relative (the guarantee is stated for equal-length curves); the
/// subsampled vertex counts must then match exactly.
inline verdict continuous_frechet_tester(const curve& p, const curve& q,
                                         double delta, double eps,
                                         double eps_prime,
                                         const tester_mode& mode, rng& rand,
                                         continuous_trace* trace = nullptr) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw bad_param("continuous_frechet_tester: need 0 < eps < 1");
  if (!(eps_prime > 0.0) || !(delta > 0.0))
    throw bad_param("continuous_frechet_tester: need eps_prime, delta > 0");
  double lp = curve_length(p), lq = curve_length(q);
  if (std::abs(lp - lq) > 1e-9 * std::max(lp, lq))
    throw length_mismatch("continuous_frechet_tester: arc lengths differ");
  double eps2 = eps_prime / 4.0;
  double a = eps2 * delta;
  double delta_prime = (1.0 + 2.0 * eps2) * delta;
  curve pa = subsample(p, a);
  curve qa = subsample(q, a);
  if (pa.size() != qa.size())
    throw length_mismatch("continuous_frechet_tester: subsample sizes differ");
  if (trace) {
    trace->eps2 = eps2;
    trace->step = a;
    trace->delta_prime = delta_prime;
    trace->p_vertices = static_cast<long long>(pa.size());
    trace->q_vertices = static_cast<long long>(qa.size());
    trace->t = mode.oblivious ? 0 : mode.t;
  }
  free_space_oracle o(pa, qa, delta_prime);
  if (mode.oblivious) return frechet_tester2(o, eps / 12.0, rand);
  tester1_params params;
  params.t = mode.t;
  params.eps = eps / 12.0;
  return frechet_tester1(o, params, rand);
}

}  // namespace fsprobe
