#pragma once

/// Batch experiment harness: certified instance recipes, seeded trial loops,
/// report serialization, query sweeps, and the internal consistency suite
/// that cross-validates the reference computations against each other.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fsprobe/errors.hpp"
#include "fsprobe/freespace.hpp"
#include "fsprobe/geometry.hpp"
#include "fsprobe/io.hpp"
#include "fsprobe/reference.hpp"
#include "fsprobe/rng.hpp"
#include "fsprobe/testers.hpp"

namespace fsprobe::harness {

// ---------------------------------------------------------------------------
// Statistics.

/// Two-sided 95% normal quantile used for every Wilson interval we report.
inline constexpr double kWilsonZ = 1.959963984540054;

/// Lower end of the Wilson score interval for a binomial proportion. All
/// success-rate claims in reports go through this (never raw point
/// estimates), so a batch of n trials can only certify rates its sample size
/// actually supports.
inline double wilson_lower_bound(long long successes, long long trials) {
  if (trials < 1) throw bad_param("wilson_lower_bound: need trials >= 1");
  if (successes < 0 || successes > trials)
    throw bad_param("wilson_lower_bound: successes out of range");
  if (successes == 0) return 0.0;  // exact: center and radius cancel at p = 0
  const double z = kWilsonZ;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double center = p + z * z / (2.0 * n);
  const double rad = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
  return std::clamp((center - rad) / denom, 0.0, 1.0);
}

/// Wall-clock stopwatch (milliseconds).
struct stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// ---------------------------------------------------------------------------
// Witness handling.

/// Human-readable one-line form of a tester witness.
inline std::string describe_witness(const witness& w) {
  std::ostringstream os;
  if (const auto* c = std::get_if<witness_corner_one>(&w)) {
    os << "corner_one(" << c->i << "," << c->j << ")";
  } else if (const auto* b = std::get_if<witness_barrier>(&w)) {
    os << "barrier(" << axis_name(b->ax) << "," << b->index << ")";
  } else if (const auto* p = std::get_if<witness_impermeable_block>(&w)) {
    os << "impermeable_block(" << axis_name(p->ax) << "," << p->lo << ".."
       << p->hi << ")";
  } else {
    const auto& l = std::get<witness_locality_breach>(w);
    os << "locality_breach(" << axis_name(l.ax) << "," << l.i1 << "," << l.i2
       << ",t=" << l.t << ")";
  }
  return os.str();
}

/// One-line form of a whole verdict.
inline std::string describe(const verdict& v) {
  if (v.answer_yes) return "yes";
  return v.wit ? describe_witness(*v.wit) : "no";
}

/// Re-validates a verdict's witness against the full matrix. A "yes" verdict
/// passes iff it carries no witness; a "no" verdict passes iff its witness
/// still certifies a violation when checked exhaustively.
inline bool recheck_witness(const bit_matrix& mat, const verdict& v) {
  if (v.answer_yes) return !v.wit.has_value();
  if (!v.wit.has_value()) return false;
  const witness& w = *v.wit;
  auto slice_len = [&](axis ax) { return ax == axis::columns ? mat.n : mat.m; };
  if (const auto* c = std::get_if<witness_corner_one>(&w)) {
    if (c->i < 1 || c->i > mat.n || c->j < 1 || c->j > mat.m) return false;
    return mat.at(c->i, c->j) == 1;
  }
  if (const auto* b = std::get_if<witness_barrier>(&w)) {
    if (b->index < 1 || b->index > slice_len(b->ax)) return false;
    const int other = b->ax == axis::columns ? mat.m : mat.n;
    for (int k = 1; k <= other; ++k) {
      const std::uint8_t bit = b->ax == axis::columns ? mat.at(b->index, k)
                                                      : mat.at(k, b->index);
      if (bit == 0) return false;
    }
    return true;
  }
  if (const auto* p = std::get_if<witness_impermeable_block>(&w)) {
    if (p->lo < 1 || p->hi > slice_len(p->ax) || p->lo > p->hi) return false;
    return !reference::brute_permeable(mat, p->ax, p->lo, p->hi);
  }
  const auto& l = std::get<witness_locality_breach>(w);
  if (l.i1 < 1 || l.i1 > slice_len(l.ax) || l.i2 < 1 ||
      l.i2 > slice_len(l.ax) || l.t < 0)
    return false;
  free_space_oracle o(mat);
  if (l.i1 == l.i2) return !second_order_passes(o, l.ax, l.i1, l.t);
  return l.ax == axis::columns ? !columns_pass(o, l.i1, l.i2, l.t)
                               : !rows_pass(o, l.i1, l.i2, l.t);
}

// ---------------------------------------------------------------------------
// Small matrix utilities shared by recipes, the suite, and the CLI.

/// Reads every column of an oracle and assembles the full matrix.
inline bit_matrix materialize(query_oracle& o) {
  bit_matrix mat(o.n_cols(), o.n_rows(), 1);
  for (int i = 1; i <= o.n_cols(); ++i)
    for (std::int32_t j : o.query_column(i)) mat.set(i, j, 0);
  return mat;
}

/// Serialized matrix in the library's text format (also counterexample dump).
inline std::string matrix_text(const bit_matrix& mat) {
  std::ostringstream os;
  io::write_matrix(mat, os);
  return os.str();
}

namespace detail {

/// Uniform random matrix: each entry is zero with probability zero_prob.
inline bit_matrix random_matrix(int n, int m, double zero_prob, rng& rand) {
  bit_matrix mat(n, m, 1);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= m; ++j)
      if (rand.uniform_real() < zero_prob) mat.set(i, j, 0);
  return mat;
}

/// Number of empty columns / empty rows, straight off the index lists.
inline std::pair<int, int> barrier_counts(const free_space_data& d) {
  int bc = 0, br = 0;
  for (int i = 1; i <= d.n_cols(); ++i)
    if (d.column(i).empty()) ++bc;
  for (int j = 1; j <= d.n_rows(); ++j)
    if (d.row(j).empty()) ++br;
  return {bc, br};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Certification predicates. Every "far" recipe must pass one of these before
// the instance is handed out; an instance that fails certification is
// regenerated or rejected, never silently used.

/// Certifies farness via barrier counting: a monotone coupling path visits
/// every column and every row at least once, so its cost is at least the
/// larger barrier count. Throws unless that bound exceeds eps * n_cols.
inline void certify_far_by_barriers(const free_space_data& d, double eps,
                                    const std::string& who) {
  auto [bc, br] = detail::barrier_counts(d);
  const double bound = static_cast<double>(std::max(bc, br));
  if (!(bound > eps * static_cast<double>(d.n_cols())))
    throw recipe_verification_failed(
        who + ": barrier bound " + std::to_string(bound) +
        " does not certify farness at eps=" + std::to_string(eps));
}

/// Certifies that at least eps * (n + m) slices are barriers.
inline void certify_barrier_mass(const free_space_data& d, double eps,
                                 const std::string& who) {
  auto [bc, br] = detail::barrier_counts(d);
  const double mass = static_cast<double>(bc + br);
  if (!(mass >= eps * static_cast<double>(d.n_cols() + d.n_rows())))
    throw recipe_verification_failed(
        who + ": only " + std::to_string(bc + br) + " barrier slices");
}

/// Certifies that no column and no row is a barrier.
inline void certify_no_barriers(const free_space_data& d,
                                const std::string& who) {
  auto [bc, br] = detail::barrier_counts(d);
  if (bc != 0 || br != 0)
    throw recipe_verification_failed(who + ": unexpected barrier slice");
}

// ---------------------------------------------------------------------------
// Curve instance recipes.

/// A curve pair together with its free-space data at the chosen threshold.
struct curve_instance {
  curve p, q;
  double delta = 1.0;
  std::shared_ptr<const free_space_data> data;
};

/// Near pair: a straight-ish base curve and a small perturbation of it.
/// Certified by dynamic programming to admit a zero-cost coupling path, and
/// regenerated until the matrix locality is at most max_locality (small
/// localities keep the testers' budgets small). Throws
/// recipe_verification_failed when no attempt certifies.
inline curve_instance gen_yes_instance(long long n_lo, long long n_hi,
                                       double delta, double max_locality,
                                       rng& rand) {
  if (n_lo < 2 || n_hi < n_lo)
    throw bad_param("gen_yes_instance: bad size range");
  for (std::uint64_t a = 0; a < 64; ++a) {
    rng sub = rand.split(a);
    const auto n = static_cast<std::size_t>(sub.uniform_int(n_lo, n_hi));
    curve p = gen_straight_curve(n, 2, 0.9 * delta, 1.1 * delta, 0.35, sub);
    curve q = perturb_within(p, 0.45 * delta, sub);
    auto d = std::make_shared<free_space_data>(
        free_space_data::from_curves(p, q, delta));
    if (reference::min_cost_coupling(d->to_matrix()) != 0) continue;
    if (reference::exact_locality(*d) > max_locality) continue;
    return {std::move(p), std::move(q), delta, std::move(d)};
  }
  throw recipe_verification_failed(
      "gen_yes_instance: no certified instance in 64 attempts");
}

/// Far pair: a straight-ish base curve against a copy with a displaced
/// interior block. Certified far by dynamic programming (minimum coupling
/// cost strictly above eps * n). Throws recipe_verification_failed when no
/// attempt certifies.
inline curve_instance gen_far_instance(long long n, double eps, double delta,
                                       double margin, rng& rand) {
  if (n < 3) throw bad_param("gen_far_instance: need n >= 3");
  for (std::uint64_t a = 0; a < 16; ++a) {
    rng sub = rand.split(a);
    curve p = gen_straight_curve(static_cast<std::size_t>(n), 2, 0.9 * delta,
                                 1.1 * delta, 0.3, sub);
    curve q = make_far_pair(p, eps, delta, margin, sub);
    auto d = std::make_shared<free_space_data>(
        free_space_data::from_curves(p, q, delta));
    const long long cost = reference::min_cost_coupling(d->to_matrix());
    if (!(static_cast<double>(cost) > eps * static_cast<double>(n))) continue;
    return {std::move(p), std::move(q), delta, std::move(d)};
  }
  throw recipe_verification_failed(
      "gen_far_instance: no certified instance in 16 attempts");
}

// ---------------------------------------------------------------------------
// Matrix instance recipes.

/// Square band matrix: entry (i, j) is zero iff |i - j| <= half_width. The
/// diagonal itself is an explicit zero-cost coupling path, which is verified
/// entry by entry before the instance is handed out.
inline std::shared_ptr<const free_space_data> band_instance(
    long long n, long long half_width) {
  if (n < 2 || half_width < 0)
    throw bad_param("band_instance: need n >= 2, half_width >= 0");
  std::vector<std::vector<std::int32_t>> by_col(
      static_cast<std::size_t>(n));
  for (long long i = 1; i <= n; ++i) {
    const long long lo = std::max(1LL, i - half_width);
    const long long hi = std::min(n, i + half_width);
    auto& col = by_col[static_cast<std::size_t>(i - 1)];
    col.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long long j = lo; j <= hi; ++j)
      col.push_back(static_cast<std::int32_t>(j));
  }
  auto d = std::make_shared<free_space_data>(free_space_data::from_column_zeros(
      static_cast<int>(n), static_cast<int>(n), by_col));
  for (int i = 1; i <= static_cast<int>(n); ++i) {
    zero_list col = d->column(i);
    if (!std::binary_search(col.begin(), col.end(), i))
      throw recipe_verification_failed("band_instance: diagonal not clear");
  }
  return d;
}

/// Square matrix whose only zeros are rows 1 and n (every column's zero list
/// is {1, n}); all n - 2 interior rows are barriers. Certified far: a
/// monotone path must cross every interior row.
inline std::shared_ptr<const free_space_data> interior_barrier_instance(
    long long n, double eps) {
  if (n < 4) throw bad_param("interior_barrier_instance: need n >= 4");
  std::vector<std::vector<std::int32_t>> by_col(
      static_cast<std::size_t>(n),
      {std::int32_t{1}, static_cast<std::int32_t>(n)});
  auto d = std::make_shared<free_space_data>(free_space_data::from_column_zeros(
      static_cast<int>(n), static_cast<int>(n), by_col));
  certify_far_by_barriers(*d, eps, "interior_barrier_instance");
  return d;
}

/// Band matrix with a sampled fraction of interior columns turned into
/// barriers (columns 1 and n keep their zeros, so the corner entries stay
/// clear). Certified far via the barrier bound and certified to stay
/// 2-local, so round one of the locality estimator passes deterministically.
inline std::shared_ptr<const free_space_data> banded_barrier_instance(
    long long n, long long half_width, double barrier_frac, double eps,
    rng& rand) {
  if (n < 8) throw bad_param("banded_barrier_instance: need n >= 8");
  if (!(barrier_frac > 0.0) || !(barrier_frac < 1.0))
    throw bad_param("banded_barrier_instance: need 0 < barrier_frac < 1");
  for (std::uint64_t a = 0; a < 8; ++a) {
    rng sub = rand.split(a);
    std::vector<std::vector<std::int32_t>> by_col(
        static_cast<std::size_t>(n));
    for (long long i = 1; i <= n; ++i) {
      const long long lo = std::max(1LL, i - half_width);
      const long long hi = std::min(n, i + half_width);
      auto& col = by_col[static_cast<std::size_t>(i - 1)];
      for (long long j = lo; j <= hi; ++j)
        col.push_back(static_cast<std::int32_t>(j));
    }
    long long k = std::llround(barrier_frac * static_cast<double>(n));
    k = std::min(k, n - 2);
    for (long long v : sub.sample_distinct(n - 2, k))
      by_col[static_cast<std::size_t>(v + 1)].clear();  // columns 2 .. n-1
    auto d = std::make_shared<free_space_data>(
        free_space_data::from_column_zeros(static_cast<int>(n),
                                           static_cast<int>(n), by_col));
    certify_far_by_barriers(*d, eps, "banded_barrier_instance");
    if (reference::exact_locality(*d) > 2.0) continue;
    return d;
  }
  throw recipe_verification_failed(
      "banded_barrier_instance: no certified instance in 8 attempts");
}

/// Diagonal matrix with one column widened to {c - t_star, c, c + t_star}.
/// Certified to have exact locality equal to t_star (the widened column's
/// own spread forces t >= t_star; every cross pair needs strictly less).
inline std::shared_ptr<const free_space_data> spread_instance(
    long long n, long long t_star) {
  if (t_star < 1 || n < 2 * t_star + 4)
    throw bad_param("spread_instance: need t_star >= 1, n >= 2*t_star + 4");
  std::vector<std::vector<std::int32_t>> by_col(
      static_cast<std::size_t>(n));
  for (long long i = 1; i <= n; ++i)
    by_col[static_cast<std::size_t>(i - 1)] = {static_cast<std::int32_t>(i)};
  const long long c = n / 2;
  by_col[static_cast<std::size_t>(c - 1)] = {
      static_cast<std::int32_t>(c - t_star), static_cast<std::int32_t>(c),
      static_cast<std::int32_t>(c + t_star)};
  auto d = std::make_shared<free_space_data>(free_space_data::from_column_zeros(
      static_cast<int>(n), static_cast<int>(n), by_col));
  if (reference::exact_locality(*d) != static_cast<double>(t_star))
    throw recipe_verification_failed("spread_instance: locality drifted");
  return d;
}

/// Rectangular band following the main "diagonal" of an n x m matrix, with
/// half-width w around the interpolated center row. Certified barrier-free.
inline std::shared_ptr<const free_space_data> rect_band_instance(long long n,
                                                                 long long m,
                                                                 long long w) {
  if (n < 2 || m < 2 || w < 0) throw bad_param("rect_band_instance: bad dims");
  std::vector<std::vector<std::int32_t>> by_col(
      static_cast<std::size_t>(n));
  for (long long i = 1; i <= n; ++i) {
    const long long center =
        1 + std::llround(static_cast<double>((i - 1) * (m - 1)) /
                         static_cast<double>(n - 1));
    const long long lo = std::max(1LL, center - w);
    const long long hi = std::min(m, center + w);
    auto& col = by_col[static_cast<std::size_t>(i - 1)];
    for (long long j = lo; j <= hi; ++j)
      col.push_back(static_cast<std::int32_t>(j));
  }
  auto d = std::make_shared<free_space_data>(free_space_data::from_column_zeros(
      static_cast<int>(n), static_cast<int>(m), by_col));
  certify_no_barriers(*d, "rect_band_instance");
  return d;
}

/// Rectangular band with empty_count random columns emptied. Certified to
/// carry at least eps * (n + m) barrier slices in total.
inline std::shared_ptr<const free_space_data> barrier_columns_instance(
    long long n, long long m, long long w, long long empty_count, double eps,
    rng& rand) {
  if (empty_count < 1 || empty_count > n)
    throw bad_param("barrier_columns_instance: bad empty_count");
  std::vector<std::vector<std::int32_t>> by_col(
      static_cast<std::size_t>(n));
  for (long long i = 1; i <= n; ++i) {
    const long long center =
        1 + std::llround(static_cast<double>((i - 1) * (m - 1)) /
                         static_cast<double>(n - 1));
    const long long lo = std::max(1LL, center - w);
    const long long hi = std::min(m, center + w);
    auto& col = by_col[static_cast<std::size_t>(i - 1)];
    for (long long j = lo; j <= hi; ++j)
      col.push_back(static_cast<std::int32_t>(j));
  }
  for (long long v : rand.sample_distinct(n, empty_count))
    by_col[static_cast<std::size_t>(v)].clear();
  auto d = std::make_shared<free_space_data>(free_space_data::from_column_zeros(
      static_cast<int>(n), static_cast<int>(m), by_col));
  certify_barrier_mass(*d, eps, "barrier_columns_instance");
  return d;
}

// ---------------------------------------------------------------------------
// Trial batches.

/// One seeded tester run.
struct trial_record {
  std::uint64_t seed = 0;
  bool yes = true;
  std::uint64_t queries = 0;
  std::string wit;        ///< empty for yes verdicts
  double wall_ms = -1.0;  ///< negative when wall time was not recorded
};

/// Aggregate over a batch of seeded runs.
struct trial_report {
  std::string label;
  std::uint64_t base_seed = 0;
  std::vector<trial_record> records;  ///< in seed order
  long long yes_count = 0, no_count = 0;
  double yes_rate = 0.0, no_rate = 0.0;
  double wilson_lb_no = 0.0;  ///< Wilson 95% lower bound on the no-rate
  std::uint64_t q_min = 0, q25 = 0, q50 = 0, q75 = 0, q90 = 0, q_max = 0;
};

namespace detail {

/// Nearest-rank percentile of a sorted sample.
inline std::uint64_t nearest_rank(const std::vector<std::uint64_t>& sorted,
                                  double frac) {
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(frac * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace detail

/// Runs `trials` independent repetitions of `trial`. Repetition i gets its
/// own generator seeded with base_seed + i, so any single record can be
/// reproduced in isolation. `trial` is invoked as trial(rng&) -> verdict.
template <typename Fn>
trial_report run_batch(std::string label, long long trials,
                       std::uint64_t base_seed, Fn&& trial,
                       bool record_wall = false) {
  if (trials < 1) throw bad_param("run_batch: need trials >= 1");
  trial_report rep;
  rep.label = std::move(label);
  rep.base_seed = base_seed;
  rep.records.reserve(static_cast<std::size_t>(trials));
  for (long long i = 0; i < trials; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    rng r(seed);
    stopwatch sw;
    verdict v = trial(r);
    trial_record rec;
    rec.seed = seed;
    rec.yes = v.answer_yes;
    rec.queries = v.queries_used;
    if (!v.answer_yes && v.wit) rec.wit = describe_witness(*v.wit);
    if (record_wall) rec.wall_ms = sw.ms();
    if (rec.yes)
      ++rep.yes_count;
    else
      ++rep.no_count;
    rep.records.push_back(std::move(rec));
  }
  const double n = static_cast<double>(trials);
  rep.yes_rate = static_cast<double>(rep.yes_count) / n;
  rep.no_rate = static_cast<double>(rep.no_count) / n;
  rep.wilson_lb_no = wilson_lower_bound(rep.no_count, trials);
  std::vector<std::uint64_t> qs;
  qs.reserve(rep.records.size());
  for (const auto& r : rep.records) qs.push_back(r.queries);
  std::sort(qs.begin(), qs.end());
  rep.q_min = qs.front();
  rep.q25 = detail::nearest_rank(qs, 0.25);
  rep.q50 = detail::nearest_rank(qs, 0.50);
  rep.q75 = detail::nearest_rank(qs, 0.75);
  rep.q90 = detail::nearest_rank(qs, 0.90);
  rep.q_max = qs.back();
  return rep;
}

/// Serializes a report as JSON lines: one object per record, then one
/// aggregate footer object. Key order is alphabetical (nlohmann's default),
/// so equal reports serialize byte-identically.
inline void write_report_jsonl(std::ostream& out, const trial_report& rep) {
  for (const auto& r : rep.records) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["yes"] = r.yes;
    j["queries"] = r.queries;
    if (!r.wit.empty()) j["witness"] = r.wit;
    if (r.wall_ms >= 0.0) j["wall_ms"] = r.wall_ms;
    out << j.dump() << '\n';
  }
  nlohmann::json f;
  f["label"] = rep.label;
  f["base_seed"] = rep.base_seed;
  f["trials"] = rep.records.size();
  f["yes_rate"] = rep.yes_rate;
  f["no_rate"] = rep.no_rate;
  f["wilson_lb_no"] = rep.wilson_lb_no;
  f["queries"] = {{"min", rep.q_min},    {"q25", rep.q25},
                  {"median", rep.q50},   {"q75", rep.q75},
                  {"p90", rep.q90},      {"max", rep.q_max}};
  out << f.dump() << '\n';
}

// ---------------------------------------------------------------------------
// Query sweeps.

/// One sweep position: query statistics at a single axis value.
struct sweep_point {
  double axis_value = 0.0;
  std::uint64_t median_q = 0;
  std::uint64_t p90_q = 0;
  double no_rate = 0.0;
  double wilson_lb = 0.0;
};

/// Runs a batch per axis value. `trial` is invoked as
/// trial(double axis_value, rng&) -> verdict; value k's batch starts at
/// base_seed + k * trials_per_value, so the whole sweep is reproducible.
template <typename Fn>
std::vector<sweep_point> sweep_queries(const std::vector<double>& values,
                                       long long trials_per_value,
                                       std::uint64_t base_seed, Fn&& trial) {
  std::vector<sweep_point> pts;
  pts.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    trial_report rep = run_batch(
        "sweep", trials_per_value,
        base_seed + static_cast<std::uint64_t>(k) *
                        static_cast<std::uint64_t>(trials_per_value),
        [&](rng& r) { return trial(v, r); });
    pts.push_back({v, rep.q50, rep.q90, rep.no_rate, rep.wilson_lb_no});
  }
  return pts;
}

/// Exactly five columns: axis_value, median_q, p90_q, no_rate, wilson_lb.
inline void write_sweep_csv(std::ostream& out,
                            const std::vector<sweep_point>& pts) {
  out << "axis_value,median_q,p90_q,no_rate,wilson_lb\n";
  for (const auto& p : pts)
    out << io::double_to_string(p.axis_value) << ',' << p.median_q << ','
        << p.p90_q << ',' << io::double_to_string(p.no_rate) << ','
        << io::double_to_string(p.wilson_lb) << '\n';
}

/// Side-channel fit diagnostics: the measured medians divided by a candidate
/// scaling law, one line per sweep point.
inline void write_fit_table(std::ostream& out, const std::string& label,
                            const std::vector<sweep_point>& pts,
                            const std::function<double(double)>& scale) {
  for (const auto& p : pts) {
    const double s = scale(p.axis_value);
    out << label << " axis=" << io::double_to_string(p.axis_value)
        << " median_q=" << p.median_q << " p90_q=" << p.p90_q << " ratio="
        << io::double_to_string(static_cast<double>(p.median_q) / s) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Internal consistency suite.

/// Outcome of one suite check.
struct check_outcome {
  std::string name;
  bool passed = true;
  long long instances = 0;
  std::string first_counterexample;  ///< verbatim dump; empty when passed
};

/// Outcome of the whole suite.
struct suite_result {
  std::vector<check_outcome> checks;
  long long failures() const {
    long long f = 0;
    for (const auto& c : checks)
      if (!c.passed) ++f;
    return f;
  }
  long long checks_run() const {
    return static_cast<long long>(checks.size());
  }
};

/// The hand-built 6x6 matrix used as the first instance of the layer-bracket
/// check. Its zeros are column 1 at rows {1, 6} plus all of row 6. The
/// minimum-cost diagonally-restricted path from (1,1) to (6,6) must hug
/// column 1 and row 6 (cost 4, seven zeros); a path builder that cuts the
/// corner diagonally through one-entries keeps cost 4 but visits only the
/// two corner zeros, and the layer bracket then fails.
inline bit_matrix broken_elbow_matrix() {
  bit_matrix mat(6, 6, 1);
  mat.set(1, 1, 0);
  for (int i = 1; i <= 6; ++i) mat.set(i, 6, 0);
  return mat;
}

namespace detail {

/// Runs `count` seeded instances of `body`; stops at the first failure.
/// body(k, sub_rng, &why) returns false to fail the check and fills why.
template <typename Body>
check_outcome run_check(const std::string& name, long long count, rng& ck,
                        Body&& body) {
  check_outcome out;
  out.name = name;
  out.instances = count;
  for (long long k = 0; k < count; ++k) {
    rng sub = ck.split(static_cast<std::uint64_t>(k));
    std::string why;
    if (!body(k, sub, &why)) {
      out.passed = false;
      out.first_counterexample = why;
      break;
    }
  }
  return out;
}

/// Appends "name (i1,j1)" style cell text.
inline std::string cell_text(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace detail

/// Cross-validates the reference computations against each other on randomly
/// generated instances, a fixed number per check, from one master seed. Logs
/// one line per check and any counterexample verbatim. The `rule` parameter
/// is the diagonal-step rule handed to the path builder; the default is the
/// library's real rule, and tests substitute a broken one to prove the suite
/// detects it.
inline suite_result verify_suite(
    std::ostream& log, std::uint64_t seed, long long instances_per_check = 1000,
    reference::diag_step_rule rule = reference::diagonal_joins_zeros) {
  if (instances_per_check < 1)
    throw bad_param("verify_suite: need instances_per_check >= 1");
  rng master(seed);
  suite_result res;
  auto add = [&](check_outcome c) {
    log << (c.passed ? "[ok]   " : "[FAIL] ") << c.name << " ("
        << c.instances << " instances)\n";
    if (!c.passed) log << c.first_counterexample << '\n';
    res.checks.push_back(std::move(c));
  };

  // 1. On a minimum-cost diagonally-restricted path, every gap between
  //    consecutive zero-entries spans a box whose interior is all ones.
  {
    rng ck = master.split(1);
    add(detail::run_check(
        "min-path gaps span all-one boxes", instances_per_check, ck,
        [&](long long, rng& sub, std::string* why) {
          const double p0 = 0.3 + 0.3 * sub.uniform_real();
          bit_matrix mat = detail::random_matrix(10, 10, p0, sub);
          reference::cost_path path = reference::min_cost_diag_restricted_path(
              mat, {1, 1, mat.n, mat.m}, rule);
          int pi = 0, pj = 0;  // previous zero on the path (0 = none yet)
          long long ones_between = 0;
          for (const auto& [ci, cj] : path.cells) {
            if (mat.at(ci, cj) == 1) {
              ++ones_between;
              continue;
            }
            if (pi != 0 && ones_between > 0) {
              for (int i = pi; i <= ci; ++i)
                for (int j = pj; j <= cj; ++j) {
                  if ((i == pi && j == pj) || (i == ci && j == cj)) continue;
                  if (mat.at(i, j) == 0) {
                    *why = matrix_text(mat) + "path zeros " +
                           detail::cell_text(pi, pj) + " and " +
                           detail::cell_text(ci, cj) +
                           " bracket a gap, but interior cell " +
                           detail::cell_text(i, j) + " is zero";
                    return false;
                  }
                }
            }
            pi = ci;
            pj = cj;
            ones_between = 0;
          }
          return true;
        }));
  }

  // 2. The layer count of a rectangle spanned by two zero-entries brackets
  //    the number of zeros on a minimum-cost diagonally-restricted path
  //    between them: z <= L <= 2z.
  {
    rng ck = master.split(2);
    add(detail::run_check(
        "layer count brackets min-path zeros", instances_per_check, ck,
        [&](long long k, rng& sub, std::string* why) {
          bit_matrix mat;
          reference::cell_rect r{};
          if (k == 0) {
            mat = broken_elbow_matrix();
            r = {1, 1, 6, 6};
          } else {
            const double p0 = 0.25 + 0.3 * sub.uniform_real();
            mat = detail::random_matrix(8, 8, p0, sub);
            std::vector<std::pair<int, int>> zeros;
            for (int i = 1; i <= mat.n; ++i)
              for (int j = 1; j <= mat.m; ++j)
                if (mat.at(i, j) == 0) zeros.emplace_back(i, j);
            if (zeros.size() < 2) return true;  // nothing to span
            bool found = false;
            for (int tries = 0; tries < 40 && !found; ++tries) {
              auto a = zeros[static_cast<std::size_t>(sub.uniform_int(
                  0, static_cast<long long>(zeros.size()) - 1))];
              auto b = zeros[static_cast<std::size_t>(sub.uniform_int(
                  0, static_cast<long long>(zeros.size()) - 1))];
              if (a == b) continue;
              if (a.first <= b.first && a.second <= b.second) {
                r = {a.first, a.second, b.first, b.second};
                found = true;
              } else if (b.first <= a.first && b.second <= a.second) {
                r = {b.first, b.second, a.first, a.second};
                found = true;
              }
            }
            if (!found) return true;  // no comparable zero pair sampled
          }
          reference::cost_path path =
              reference::min_cost_diag_restricted_path(mat, r, rule);
          const long long z = reference::path_zero_count(mat, path);
          const long long L = reference::layer_count(mat, r);
          if (z <= L && L <= 2 * z) return true;
          *why = matrix_text(mat) + "rect " + detail::cell_text(r.i1, r.j1) +
                 ".." + detail::cell_text(r.i2, r.j2) +
                 ": path zeros z=" + std::to_string(z) +
                 ", layers L=" + std::to_string(L) +
                 " violate z <= L <= 2z";
          return false;
        }));
  }

  // 3. Restricting diagonal steps to zero-joining ones costs at most a
  //    factor three: coupling <= diag-restricted <= 3 * coupling.
  {
    rng ck = master.split(3);
    add(detail::run_check(
        "diagonal-restricted cost within 3x coupling cost",
        instances_per_check, ck, [&](long long, rng& sub, std::string* why) {
          const int n = static_cast<int>(sub.uniform_int(2, 8));
          const int m = static_cast<int>(sub.uniform_int(2, 8));
          const double p0 = 0.2 + 0.5 * sub.uniform_real();
          bit_matrix mat = detail::random_matrix(n, m, p0, sub);
          const long long c = reference::min_cost_coupling(mat);
          const long long d = reference::min_cost_diagonal_restricted(mat);
          if (c <= d && d <= 3 * c) return true;
          *why = matrix_text(mat) + "coupling cost " + std::to_string(c) +
                 ", diagonal-restricted cost " + std::to_string(d);
          return false;
        }));
  }

  // 4. Straight curves with edges in [delta/alpha, alpha*delta] produce
  //    matrices whose exact locality is at most alpha^2 * kappa.
  {
    rng ck = master.split(4);
    add(detail::run_check(
        "straight curves yield local matrices", instances_per_check, ck,
        [&](long long, rng& sub, std::string* why) {
          const double alpha = 2.0, delta = 1.0;
          const auto n = static_cast<std::size_t>(sub.uniform_int(20, 120));
          curve p = gen_straight_curve(n, 2, 0.8, 1.2, 0.4, sub);
          curve q = perturb_within(p, 0.1, sub);
          for (const curve* c : {&p, &q}) {
            auto [lo, hi] = edge_length_range(*c);
            if (!(lo >= delta / alpha && hi <= alpha * delta)) {
              *why = "generated curve left the edge range [" +
                     io::double_to_string(delta / alpha) + ", " +
                     io::double_to_string(alpha * delta) + "]: [" +
                     io::double_to_string(lo) + ", " +
                     io::double_to_string(hi) + "]";
              return false;
            }
          }
          const double kappa = std::max(straightness(p), straightness(q));
          const double loc = reference::exact_locality(
              free_space_data::from_curves(p, q, delta));
          if (loc <= alpha * alpha * kappa + 1e-9) return true;
          *why = "straightness " + io::double_to_string(kappa) +
                 " allows locality " +
                 io::double_to_string(alpha * alpha * kappa) +
                 " but the matrix has locality " + io::double_to_string(loc) +
                 "\n" + matrix_text(free_space_matrix(p, q, delta));
          return false;
        }));
  }

  // 5. The Hausdorff distance is within delta iff no slice is a barrier.
  {
    rng ck = master.split(5);
    add(detail::run_check(
        "hausdorff within delta iff no barrier slice", instances_per_check,
        ck, [&](long long k, rng& sub, std::string* why) {
          const auto n = static_cast<std::size_t>(sub.uniform_int(3, 12));
          const auto m = static_cast<std::size_t>(sub.uniform_int(3, 12));
          curve p = gen_straight_curve(n, 2, 0.5, 1.5, 1.2, sub);
          curve q = (k % 4 == 0) ? p : gen_straight_curve(m, 2, 0.5, 1.5, 1.2, sub);
          const double dh = reference::discrete_hausdorff(p, q);
          for (double f : {0.9, 1.0, 1.1}) {
            const double delta = f * dh;
            bit_matrix mat = free_space_matrix(p, q, delta);
            auto [bc, br] = reference::count_barriers(mat);
            const bool no_barriers = bc == 0 && br == 0;
            const bool within = dh <= delta;
            if (no_barriers != within) {
              *why = matrix_text(mat) + "hausdorff " +
                     io::double_to_string(dh) + " vs delta " +
                     io::double_to_string(delta) + ": barriers (" +
                     std::to_string(bc) + "," + std::to_string(br) +
                     ") disagree with the distance comparison";
              return false;
            }
          }
          return true;
        }));
  }

  // 6. Index reduction sandwiches the Fréchet distance: with beta derived
  //    from (eps', delta, alpha), a zero-cost coupling in the reduced matrix
  //    implies d <= (1+eps')*delta, and its absence implies d > (1-eps')*delta.
  {
    rng ck = master.split(6);
    add(detail::run_check(
        "index-reduced coupling sandwiches frechet distance",
        instances_per_check, ck, [&](long long k, rng& sub, std::string* why) {
          const double gamma = 4.0, alpha = 1.2;
          const auto n = static_cast<std::size_t>(sub.uniform_int(40, 160));
          curve p = gen_straight_curve(n, 2, 0.35, 1.15, 0.3, sub);
          const double eps_prime = 0.2 + 0.7 * sub.uniform_real();
          const double delta = 0.8 + 13.2 * sub.uniform_real();
          curve q;
          if (k % 2 == 0) {
            q = perturb_within(p, 0.02, sub);
          } else {
            q = p;
            std::vector<double> v = fsprobe::detail::random_unit_vector(2, sub);
            const double len = (1.7 + 0.6 * sub.uniform_real()) * delta;
            for (auto& pt : q.pts)
              for (int d0 = 0; d0 < 2; ++d0)
                pt[static_cast<std::size_t>(d0)] +=
                    len * v[static_cast<std::size_t>(d0)];
          }
          for (const curve* c : {&p, &q}) {
            auto [lo, hi] = edge_length_range(*c);
            if (!(lo >= alpha / gamma && hi <= alpha)) {
              *why = "edge range [" + io::double_to_string(lo) + ", " +
                     io::double_to_string(hi) + "] outside [alpha/gamma, alpha]";
              return false;
            }
          }
          const long long beta = compute_beta(eps_prime, delta, alpha);
          free_space_oracle base(
              std::make_shared<free_space_data>(
                  free_space_data::from_curves(p, q, delta)));
          reduced_oracle red(base, beta);
          if (red.n_cols() < 2 || red.n_rows() < 2) return true;
          bit_matrix rmat = materialize(red);
          const long long rc = reference::min_cost_coupling(rmat);
          const double df = reference::discrete_frechet(p, q);
          const bool ok = rc == 0 ? df <= (1.0 + eps_prime) * delta + 1e-9
                                  : df > (1.0 - eps_prime) * delta - 1e-9;
          if (ok) return true;
          *why = matrix_text(rmat) + "beta=" + std::to_string(beta) +
                 " eps'=" + io::double_to_string(eps_prime) + " delta=" +
                 io::double_to_string(delta) + " reduced cost " +
                 std::to_string(rc) + " but frechet distance " +
                 io::double_to_string(df);
          return false;
        }));
  }

  // 7. For straight pairs with edges and endpoint gaps within the Hausdorff
  //    distance, the Fréchet distance is at most (1.5*kappa + 2.5) times it.
  {
    rng ck = master.split(7);
    add(detail::run_check(
        "hausdorff bounds frechet for straight pairs", instances_per_check,
        ck, [&](long long k, rng& sub, std::string* why) {
          curve p, q;
          bool built = false;
          for (int attempt = 0; attempt < 50 && !built; ++attempt) {
            if (k % 2 == 0) {
              // Plane curve against its vertical offset: edges stay below
              // the lift, endpoints sit exactly one lift apart.
              const auto n = static_cast<std::size_t>(sub.uniform_int(12, 40));
              curve flat = gen_straight_curve(n, 2, 0.7, 1.3, 0.5, sub);
              p.pts.clear();
              for (const auto& pt : flat.pts) p.pts.push_back({pt[0], pt[1], 0.0});
              const double h =
                  edge_length_range(p).second * (1.02 + 0.7 * sub.uniform_real());
              q = p;
              for (auto& pt : q.pts) pt[2] += h;
            } else {
              // Straight run against a copy that backtracks: the Hausdorff
              // distance stays near the track height while the Fréchet
              // distance grows with the backtrack span.
              const long long depth = sub.uniform_int(2, 5);
              const long long len = sub.uniform_int(depth + 7, depth + 14);
              const long long a = sub.uniform_int(depth + 2, len - 2);
              const long long b = a - depth;
              const double h = 1.15 + 0.3 * sub.uniform_real();
              const double dy = static_cast<double>(depth) / 3.0;
              auto jitter = [&] { return 0.012 * (2.0 * sub.uniform_real() - 1.0); };
              p.pts.clear();
              q.pts.clear();
              for (long long x = 0; x <= len; ++x)
                p.pts.push_back({static_cast<double>(x), 0.0});
              for (long long x = 0; x <= a; ++x)
                q.pts.push_back({static_cast<double>(x), h + jitter()});
              for (long long x = a - 1; x >= b; --x)
                q.pts.push_back(
                    {static_cast<double>(x),
                     h - dy * static_cast<double>(a - x) /
                             static_cast<double>(depth) +
                         jitter()});
              for (long long x = b + 1; x <= len; ++x)
                q.pts.push_back(
                    {static_cast<double>(x),
                     h - dy * static_cast<double>(len - x) /
                             static_cast<double>(len - b) +
                         jitter()});
            }
            const double dh = reference::discrete_hausdorff(p, q);
            const double e_max =
                std::max(edge_length_range(p).second, edge_length_range(q).second);
            const double end1 = dist(p.pts.front(), q.pts.front());
            const double end2 = dist(p.pts.back(), q.pts.back());
            built = e_max <= dh && end1 <= dh && end2 <= dh;
          }
          if (!built) {
            *why = "could not generate an instance meeting the preconditions";
            return false;
          }
          const double dh = reference::discrete_hausdorff(p, q);
          const double kappa = std::max(straightness(p), straightness(q));
          const double df = reference::discrete_frechet(p, q);
          if (df <= (1.5 * kappa + 2.5) * dh + 1e-9) return true;
          *why = "hausdorff " + io::double_to_string(dh) + ", straightness " +
                 io::double_to_string(kappa) + " bound " +
                 io::double_to_string((1.5 * kappa + 2.5) * dh) +
                 " exceeded by frechet distance " + io::double_to_string(df) +
                 "\nP: " + io::curve_to_json(p) + "\nQ: " + io::curve_to_json(q);
          return false;
        }));
  }

  return res;
}

}  // namespace fsprobe::harness
