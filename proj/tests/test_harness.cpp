// Unit tests for the experiment harness: statistics, witness rechecking,
// certified instance recipes, batch reports, and the cross-validation suite.

#include "fsprobe/harness.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fsprobe/errors.hpp"
#include "fsprobe/reference.hpp"
#include "fsprobe/rng.hpp"
#include "fsprobe/testers.hpp"

namespace fsprobe {
namespace harness {
namespace {

TEST(WilsonLowerBound, MatchesIndependentEvaluation) {
  // Values computed with an independent implementation of the interval.
  EXPECT_NEAR(wilson_lower_bound(400, 400), 0.9904877056657033, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(280, 400), 0.6533627542224785, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(200, 400), 0.451234504169709, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(199, 200), 0.9722262956021069, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(88, 100), 0.8018790057328857, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(1, 1), 0.20654931437723742, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(3, 4), 0.3006418425824019, 1e-12);
  EXPECT_NEAR(wilson_lower_bound(0, 400), 0.0, 1e-12);
}

TEST(WilsonLowerBound, IsAConservativeMonotoneBound) {
  for (long long s = 0; s <= 50; ++s) {
    double lb = wilson_lower_bound(s, 50);
    EXPECT_GE(lb, 0.0);
    EXPECT_LE(lb, static_cast<double>(s) / 50.0);
    if (s > 0) EXPECT_GT(lb, wilson_lower_bound(s - 1, 50));
  }
  EXPECT_THROW(wilson_lower_bound(1, 0), bad_param);
  EXPECT_THROW(wilson_lower_bound(5, 4), bad_param);
}

TEST(DescribeWitness, FormatsEveryKind) {
  EXPECT_EQ(describe_witness(witness_corner_one{2, 2}), "corner_one(2,2)");
  EXPECT_EQ(describe_witness(witness_barrier{axis::columns, 17}),
            "barrier(columns,17)");
  EXPECT_EQ(describe_witness(witness_impermeable_block{axis::rows, 3, 9}),
            "impermeable_block(rows,3..9)");
  EXPECT_EQ(
      describe_witness(witness_locality_breach{axis::columns, 4, 9, 2}),
      "locality_breach(columns,4,9,t=2)");
  EXPECT_EQ(describe(verdict::accept(5)), "yes");
}

TEST(RecheckWitness, ValidatesCornerAndBarrier) {
  bit_matrix mat(4, 4, 0);
  mat.set(1, 1, 1);
  EXPECT_TRUE(recheck_witness(mat, verdict::reject(witness_corner_one{1, 1},
                                                   1)));
  // Claiming the other corner is a one is wrong: that cell is zero.
  EXPECT_FALSE(recheck_witness(mat, verdict::reject(witness_corner_one{4, 4},
                                                    2)));

  bit_matrix barred(4, 4, 0);
  for (int j = 1; j <= 4; ++j) barred.set(3, j, 1);
  EXPECT_TRUE(recheck_witness(
      barred, verdict::reject(witness_barrier{axis::columns, 3}, 1)));
  EXPECT_FALSE(recheck_witness(
      barred, verdict::reject(witness_barrier{axis::columns, 2}, 1)));
  EXPECT_FALSE(recheck_witness(
      barred, verdict::reject(witness_barrier{axis::rows, 3}, 1)));
}

TEST(RecheckWitness, ValidatesBlocksAndBreaches) {
  // Columns 1..2 reach only the top, 3..4 only the bottom.
  std::vector<std::vector<std::int32_t>> by_col = {{4}, {4}, {1}, {1}};
  bit_matrix mat =
      free_space_data::from_column_zeros(4, 4, by_col).to_matrix();
  EXPECT_TRUE(recheck_witness(
      mat,
      verdict::reject(witness_impermeable_block{axis::columns, 1, 4}, 4)));
  EXPECT_FALSE(recheck_witness(
      mat,
      verdict::reject(witness_impermeable_block{axis::columns, 1, 2}, 2)));

  std::vector<std::vector<std::int32_t>> spread = {{1, 4}, {2}, {3}, {4}};
  bit_matrix smat =
      free_space_data::from_column_zeros(4, 4, spread).to_matrix();
  EXPECT_TRUE(recheck_witness(
      smat,
      verdict::reject(witness_locality_breach{axis::columns, 1, 1, 1}, 1)));
  EXPECT_FALSE(recheck_witness(
      smat,
      verdict::reject(witness_locality_breach{axis::columns, 2, 2, 1}, 1)));
}

TEST(RecheckWitness, YesVerdictsMustBeBare) {
  bit_matrix mat(3, 3, 0);
  EXPECT_TRUE(recheck_witness(mat, verdict::accept(7)));
  verdict tainted = verdict::accept(7);
  tainted.wit = witness_corner_one{1, 1};
  EXPECT_FALSE(recheck_witness(mat, tainted));
  verdict bare_no;
  bare_no.answer_yes = false;
  EXPECT_FALSE(recheck_witness(mat, bare_no));
}

TEST(Materialize, ReconstructsTheMatrix) {
  rng rand(443);
  bit_matrix mat = detail::random_matrix(9, 5, 0.35, rand);
  free_space_oracle o(mat);
  bit_matrix back = materialize(o);
  ASSERT_EQ(back.n, mat.n);
  ASSERT_EQ(back.m, mat.m);
  for (int i = 1; i <= mat.n; ++i)
    for (int j = 1; j <= mat.m; ++j) EXPECT_EQ(back.at(i, j), mat.at(i, j));
  EXPECT_EQ(o.query_count(), 9u);
}

TEST(MatrixText, HeaderThenOneLinePerColumn) {
  bit_matrix mat(2, 3, 1);
  mat.set(1, 1, 0);
  mat.set(2, 3, 0);
  EXPECT_EQ(matrix_text(mat), "2 3\n011\n110\n");
}

TEST(Certifiers, FarByBarriersNeedsEnoughEmptySlices) {
  std::vector<std::vector<std::int32_t>> by_col = {
      {1}, {}, {}, {}, {}, {6}};
  free_space_data d = free_space_data::from_column_zeros(6, 6, by_col);
  EXPECT_NO_THROW(certify_far_by_barriers(d, 0.5, "test"));
  EXPECT_THROW(certify_far_by_barriers(d, 0.8, "test"),
               recipe_verification_failed);
}

TEST(Certifiers, NoBarriersRejectsEmptySlices) {
  std::vector<std::vector<std::int32_t>> ok_cols(4);
  for (int i = 1; i <= 4; ++i)
    ok_cols[static_cast<std::size_t>(i - 1)] = {static_cast<std::int32_t>(i)};
  free_space_data ok = free_space_data::from_column_zeros(4, 4, ok_cols);
  EXPECT_NO_THROW(certify_no_barriers(ok, "test"));

  std::vector<std::vector<std::int32_t>> bad_cols = {{1}, {}, {3}, {4}};
  free_space_data bad = free_space_data::from_column_zeros(4, 4, bad_cols);
  EXPECT_THROW(certify_no_barriers(bad, "test"), recipe_verification_failed);
}

TEST(Recipes, YesInstanceHasAFreeCouplingAndBoundedLocality) {
  rng rand(449);
  for (int k = 0; k < 5; ++k) {
    curve_instance inst = gen_yes_instance(32, 64, 1.0, 4.0, rand);
    ASSERT_TRUE(inst.data != nullptr);
    EXPECT_GE(inst.p.size(), 32u);
    EXPECT_LE(inst.p.size(), 64u);
    EXPECT_EQ(inst.p.size(), inst.q.size());
    bit_matrix mat = inst.data->to_matrix();
    EXPECT_EQ(reference::min_cost_coupling(mat), 0);
    EXPECT_LE(reference::exact_locality(*inst.data), 4.0);
  }
}

TEST(Recipes, FarInstanceCostExceedsTheThreshold) {
  rng rand(457);
  curve_instance inst = gen_far_instance(64, 0.3, 1.0, 3.0, rand);
  bit_matrix mat = inst.data->to_matrix();
  EXPECT_GT(reference::min_cost_coupling(mat),
            static_cast<long long>(0.3 * 64));
}

TEST(Recipes, BandInstanceIsExactlyTheBand) {
  auto d = band_instance(32, 2);
  bit_matrix mat = d->to_matrix();
  for (int i = 1; i <= 32; ++i)
    for (int j = 1; j <= 32; ++j)
      EXPECT_EQ(mat.at(i, j), std::abs(i - j) <= 2 ? 0 : 1);
}

TEST(Recipes, InteriorBarrierInstanceEmptiesEveryMiddleRow) {
  auto d = interior_barrier_instance(16, 0.25);
  EXPECT_EQ(d->n_cols(), 16);
  for (int i = 1; i <= 16; ++i) {
    zero_list z = d->column(i);
    ASSERT_EQ(z.size(), 2u);
    EXPECT_EQ(z[0], 1);
    EXPECT_EQ(z[1], 16);
  }
  for (int j = 2; j <= 15; ++j) EXPECT_TRUE(d->row(j).empty());
}

TEST(Recipes, BandedBarrierInstanceKeepsBoundariesAndLocality) {
  rng rand(461);
  auto d = banded_barrier_instance(64, 2, 0.6, 0.3, rand);
  EXPECT_FALSE(d->column(1).empty());
  EXPECT_FALSE(d->column(64).empty());
  long long empty_cols = 0;
  for (int i = 2; i <= 63; ++i)
    if (d->column(i).empty()) ++empty_cols;
  EXPECT_EQ(empty_cols, std::llround(0.6 * 64));
  EXPECT_LE(reference::exact_locality(*d), 2.0);
}

TEST(Recipes, SpreadInstanceHitsTheExactLocality) {
  for (long long t_star : {1LL, 3LL, 8LL}) {
    auto d = spread_instance(64, t_star);
    EXPECT_DOUBLE_EQ(reference::exact_locality(*d),
                     static_cast<double>(t_star));
  }
}

TEST(Recipes, RectangularRecipesCertifyBarrierCounts) {
  auto band = rect_band_instance(12, 20, 2);
  EXPECT_EQ(band->n_cols(), 12);
  EXPECT_EQ(band->n_rows(), 20);
  auto counts = detail::barrier_counts(*band);
  EXPECT_EQ(counts.first, 0);
  EXPECT_EQ(counts.second, 0);

  rng rand(463);
  auto barred = barrier_columns_instance(40, 30, 2, 25, 0.3, rand);
  auto bc = detail::barrier_counts(*barred);
  EXPECT_GE(bc.first + bc.second,
            static_cast<int>(std::ceil(0.3 * (40 + 30))));
}

TEST(RunBatch, SeedsAreSequentialAndGeneratorsReproducible) {
  // Encode the trial's first random draw into the query count so we can
  // confirm each repetition really ran on rng(base_seed + i).
  auto trial = [](rng& r) {
    return verdict::accept(
        static_cast<std::uint64_t>(r.uniform_int(0, 1 << 20)));
  };
  trial_report rep = run_batch("demo", 4, 100, trial);
  ASSERT_EQ(rep.records.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(rep.records[i].seed, 100u + i);
    rng replay(100u + i);
    EXPECT_EQ(rep.records[i].queries,
              static_cast<std::uint64_t>(replay.uniform_int(0, 1 << 20)));
  }
  EXPECT_THROW(run_batch("none", 0, 1, trial), bad_param);
}

TEST(RunBatch, PercentilesUseNearestRank) {
  EXPECT_EQ(detail::nearest_rank({1, 2, 3, 4}, 0.25), 1u);
  EXPECT_EQ(detail::nearest_rank({1, 2, 3, 4}, 0.5), 2u);
  EXPECT_EQ(detail::nearest_rank({1, 2, 3, 4}, 0.75), 3u);
  EXPECT_EQ(detail::nearest_rank({1, 2, 3, 4}, 0.9), 4u);
  EXPECT_EQ(detail::nearest_rank({7}, 0.5), 7u);

  // Seed i issues i + 1 queries, so the sorted sample is exactly 1..4.
  std::uint64_t next = 1;
  trial_report rep =
      run_batch("ladder", 4, 0, [&](rng&) { return verdict::accept(next++); });
  EXPECT_EQ(rep.q_min, 1u);
  EXPECT_EQ(rep.q25, 1u);
  EXPECT_EQ(rep.q50, 2u);
  EXPECT_EQ(rep.q75, 3u);
  EXPECT_EQ(rep.q90, 4u);
  EXPECT_EQ(rep.q_max, 4u);
}

TEST(RunBatch, AggregatesRatesAndWilsonBound) {
  // Reject exactly when the first draw is below 0.5.
  auto trial = [](rng& r) {
    if (r.uniform_real() < 0.5)
      return verdict::reject(witness_corner_one{1, 1}, 3);
    return verdict::accept(2);
  };
  trial_report rep = run_batch("rates", 200, 42, trial);
  EXPECT_EQ(rep.yes_count + rep.no_count, 200);
  EXPECT_NEAR(rep.no_rate, 0.5, 0.15);
  EXPECT_DOUBLE_EQ(rep.wilson_lb_no,
                   wilson_lower_bound(rep.no_count, 200));
  for (const auto& rec : rep.records) {
    if (rec.yes)
      EXPECT_TRUE(rec.wit.empty());
    else
      EXPECT_EQ(rec.wit, "corner_one(1,1)");
  }
}

TEST(Reports, JsonlIsByteStableAndParses) {
  auto trial = [](rng& r) {
    if (r.uniform_real() < 0.3)
      return verdict::reject(witness_barrier{axis::rows, 7}, 9);
    return verdict::accept(4);
  };
  trial_report a = run_batch("stability", 50, 7, trial);
  trial_report b = run_batch("stability", 50, 7, trial);
  std::ostringstream sa, sb;
  write_report_jsonl(sa, a);
  write_report_jsonl(sb, b);
  EXPECT_EQ(sa.str(), sb.str());

  std::istringstream in(sa.str());
  std::string line;
  long long lines = 0;
  nlohmann::json last;
  while (std::getline(in, line)) {
    last = nlohmann::json::parse(line);  // throws on malformed output
    ++lines;
  }
  EXPECT_EQ(lines, 51);  // one per record plus the summary footer
  EXPECT_EQ(last.at("label"), "stability");
  EXPECT_EQ(last.at("trials"), 50);
  EXPECT_TRUE(last.contains("wilson_lb_no"));
  EXPECT_TRUE(last.at("queries").contains("median"));
}

TEST(Reports, SweepCsvHasTheExactHeader) {
  std::vector<sweep_point> pts = {{64.0, 10, 12, 0.5, 0.25},
                                  {128.0, 20, 24, 0.75, 0.5}};
  std::ostringstream os;
  write_sweep_csv(os, pts);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "axis_value,median_q,p90_q,no_rate,wilson_lb");
  long long rows = 0;
  std::string row;
  while (std::getline(in, row)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(SweepQueries, RunsEveryValueOnDisjointSeedBlocks) {
  std::vector<std::uint64_t> seen;
  auto trial = [&](double v, rng& r) {
    (void)v;
    seen.push_back(0);
    (void)r.uniform_real();
    return verdict::accept(static_cast<std::uint64_t>(v));
  };
  auto pts = sweep_queries({8.0, 16.0}, 5, 1000, trial);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(seen.size(), 10u);
  EXPECT_DOUBLE_EQ(pts[0].axis_value, 8.0);
  EXPECT_EQ(pts[0].median_q, 8u);
  EXPECT_EQ(pts[1].median_q, 16u);
}

TEST(VerifySuite, PassesWithTheRealStepRule) {
  std::ostringstream log;
  suite_result res = verify_suite(log, 20260818, 120);
  EXPECT_EQ(res.checks_run(), 7);
  EXPECT_EQ(res.failures(), 0) << log.str();
  const char* names[] = {
      "min-path gaps span all-one boxes",
      "layer count brackets min-path zeros",
      "diagonal-restricted cost within 3x coupling cost",
      "straight curves yield local matrices",
      "hausdorff within delta iff no barrier slice",
      "index-reduced coupling sandwiches frechet distance",
      "hausdorff bounds frechet for straight pairs",
  };
  ASSERT_EQ(res.checks.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(res.checks[i].name, names[i]);
}

TEST(VerifySuite, CatchesABrokenDiagonalRule) {
  // A path builder that takes diagonal steps through one-entries keeps the
  // elbow fixture's cost but skips its zeros, so the layer bracket breaks.
  std::ostringstream log;
  suite_result res = verify_suite(
      log, 20260818, 120,
      [](const bit_matrix&, int, int) { return true; });
  EXPECT_GE(res.failures(), 1);
  const check_outcome* layer = nullptr;
  for (const auto& c : res.checks)
    if (c.name == "layer count brackets min-path zeros") layer = &c;
  ASSERT_NE(layer, nullptr);
  EXPECT_FALSE(layer->passed);
  // The counterexample is the hand-built 6x6 fixture, printed verbatim.
  EXPECT_NE(layer->first_counterexample.find("6 6\n"), std::string::npos);
  EXPECT_NE(layer->first_counterexample.find("violate z <= L <= 2z"),
            std::string::npos);
}

TEST(Stopwatch, MeasuresForward) {
  stopwatch sw;
  double sink = 0.0;
  for (int i = 0; i < 100000; ++i) sink += std::sqrt(static_cast<double>(i));
  EXPECT_GT(sink, 0.0);
  EXPECT_GE(sw.ms(), 0.0);
}

}  // namespace
}  // namespace harness
}  // namespace fsprobe
