// Command-line front end: instance generation, single tester runs, exact
// reference dumps, query sweeps, and the internal consistency suite.
//
// Exit codes for `test`: 0 = yes, 1 = no, 2 = error. Other subcommands exit
// 0 on success, 1 on a failed verification, 2 on error. The SEED environment
// variable, when set, overrides any --seed flag.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsprobe/fsprobe.hpp"

namespace {

using namespace fsprobe;

std::uint64_t pick_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("SEED"))
    return std::strtoull(env, nullptr, 10);
  return flag_seed;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void save_curve(const curve& c, const std::string& path) {
  if (ends_with(path, ".csv"))
    io::save_curve_csv(c, path);
  else
    io::save_curve_json(c, path);
}

nlohmann::json verdict_json(const std::string& algo, std::uint64_t seed,
                            const verdict& v) {
  nlohmann::json j;
  j["algo"] = algo;
  j["answer"] = v.answer_yes ? "yes" : "no";
  j["queries"] = v.queries_used;
  j["seed"] = seed;
  if (!v.answer_yes && v.wit)
    j["witness"] = harness::describe_witness(*v.wit);
  return j;
}

// --------------------------------------------------------------------------
// gen

struct gen_options {
  std::string recipe;
  long long n = 128;
  int dim = 2;
  double delta = 1.0;
  double eps = 0.2;
  double margin = 3.0;
  double edge_min = 0.9, edge_max = 1.1;
  double max_turn = 0.35;
  std::uint64_t seed = 0;
  std::string out, out_q;
};

int run_gen(const gen_options& opt) {
  rng rand(pick_seed(opt.seed));
  if (opt.recipe == "straight") {
    curve p = gen_straight_curve(static_cast<std::size_t>(opt.n), opt.dim,
                                 opt.edge_min * opt.delta,
                                 opt.edge_max * opt.delta, opt.max_turn, rand);
    save_curve(p, opt.out);
    std::cout << "wrote " << opt.out << " (" << p.size() << " vertices)\n";
    return 0;
  }
  if (opt.out_q.empty())
    throw bad_param("gen: pair recipes need --out-q for the second curve");
  harness::curve_instance inst;
  if (opt.recipe == "near-pair") {
    inst = harness::gen_yes_instance(opt.n, opt.n, opt.delta, 1e18, rand);
  } else if (opt.recipe == "far-pair") {
    inst = harness::gen_far_instance(opt.n, opt.eps, opt.delta, opt.margin,
                                     rand);
  } else {
    throw bad_param("gen: unknown recipe " + opt.recipe);
  }
  save_curve(inst.p, opt.out);
  save_curve(inst.q, opt.out_q);
  std::cout << "wrote " << opt.out << " and " << opt.out_q << " (n = "
            << inst.p.size() << ", delta = " << io::double_to_string(opt.delta)
            << ")\n";
  return 0;
}

// --------------------------------------------------------------------------
// test

struct test_options {
  std::string algo;
  std::string matrix_file, p_file, q_file;
  double delta = 1.0;
  double epsilon = 0.25;
  long long t = 0;  // 0 = not provided
  double eps_prime = 0.25;
  double alpha = 0.0;  // 0 = derive from the curves
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

int run_test(const test_options& opt) {
  const std::uint64_t seed = pick_seed(opt.seed);
  rng rand(seed);

  const bool have_curves = !opt.p_file.empty() && !opt.q_file.empty();
  curve p, q;
  if (have_curves) {
    p = io::load_curve(opt.p_file);
    q = io::load_curve(opt.q_file);
  }

  auto make_oracle = [&]() -> std::unique_ptr<free_space_oracle> {
    if (!opt.matrix_file.empty())
      return std::make_unique<free_space_oracle>(
          io::load_matrix(opt.matrix_file));
    if (!have_curves)
      throw bad_param("test: need --matrix or both --p and --q");
    return std::make_unique<free_space_oracle>(p, q, opt.delta);
  };

  verdict v;
  if (opt.algo == "frechet1") {
    if (opt.t < 1) throw bad_param("test: frechet1 needs --t >= 1");
    auto o = make_oracle();
    tester1_params params;
    params.t = opt.t;
    params.eps = opt.epsilon;
    v = frechet_tester1(*o, params, rand);
  } else if (opt.algo == "frechet2") {
    auto o = make_oracle();
    v = frechet_tester2(*o, opt.epsilon, rand);
  } else if (opt.algo == "hausdorff") {
    auto o = make_oracle();
    v = hausdorff_tester(*o, opt.epsilon, rand);
  } else if (opt.algo == "approx") {
    if (opt.t < 1) throw bad_param("test: approx needs --t >= 1");
    auto o = make_oracle();
    v = approx_frechet_tester(*o, opt.epsilon, opt.t, rand);
  } else if (opt.algo == "reduced" || opt.algo == "continuous") {
    if (!have_curves)
      throw bad_param("test: " + opt.algo + " needs --p and --q");
    tester_mode mode;
    mode.oblivious = opt.t < 1;
    if (!mode.oblivious) mode.t = opt.t;
    mode.gamma = opt.gamma;
    if (opt.algo == "reduced") {
      double alpha = opt.alpha;
      if (!(alpha > 0.0))
        alpha = std::max(edge_length_range(p).second,
                         edge_length_range(q).second);
      v = reduced_frechet_tester(p, q, opt.delta, opt.epsilon, opt.eps_prime,
                                 alpha, mode, rand);
    } else {
      v = continuous_frechet_tester(p, q, opt.delta, opt.epsilon,
                                    opt.eps_prime, mode, rand);
    }
  } else {
    throw bad_param("test: unknown --algo " + opt.algo);
  }

  std::cout << verdict_json(opt.algo, seed, v).dump() << '\n';
  return v.answer_yes ? 0 : 1;
}

// --------------------------------------------------------------------------
// exact

int run_exact(const std::string& p_file, const std::string& q_file,
              double delta) {
  curve p = io::load_curve(p_file);
  curve q = io::load_curve(q_file);
  bit_matrix mat = free_space_matrix(p, q, delta);
  auto [bc, br] = reference::count_barriers(mat);
  nlohmann::json j;
  j["delta"] = delta;
  j["frechet"] = reference::discrete_frechet(p, q);
  j["hausdorff"] = reference::discrete_hausdorff(p, q);
  j["min_cost_coupling"] = reference::min_cost_coupling(mat);
  j["min_cost_diagonal_restricted"] =
      reference::min_cost_diagonal_restricted(mat);
  j["exact_locality"] = reference::exact_locality(mat);
  j["barrier_columns"] = bc;
  j["barrier_rows"] = br;
  std::cout << j.dump() << '\n';
  return 0;
}

// --------------------------------------------------------------------------
// bench

struct bench_options {
  std::string algo = "frechet1";
  std::string axis = "n";
  std::vector<double> values;
  long long trials = 25;
  long long n = 4096;
  long long t = 8;
  double epsilon = 0.25;
  std::string instance = "band";
  long long half_width = 2;
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_bench(const bench_options& opt) {
  std::vector<double> values = opt.values;
  if (values.empty())
    values = opt.axis == "t" ? std::vector<double>{2, 4, 8, 16}
                             : std::vector<double>{1024, 2048, 4096, 8192};
  const std::uint64_t seed = pick_seed(opt.seed);

  // One certified instance per axis value, generated before any trial runs.
  rng gen(seed);
  std::vector<std::shared_ptr<const free_space_data>> datas;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const long long n_val =
        opt.axis == "n" ? static_cast<long long>(values[k]) : opt.n;
    rng sub = gen.split(k);
    if (opt.instance == "band") {
      datas.push_back(harness::band_instance(n_val, opt.half_width));
    } else if (opt.instance == "interior-barrier") {
      datas.push_back(harness::interior_barrier_instance(n_val, opt.epsilon));
    } else if (opt.instance == "banded-barrier") {
      datas.push_back(harness::banded_barrier_instance(
          n_val, opt.half_width, 0.6, opt.epsilon, sub));
    } else {
      throw bad_param("bench: unknown --instance " + opt.instance);
    }
  }

  auto trial = [&](double v, rng& r) -> verdict {
    std::size_t k = 0;
    while (k < values.size() && values[k] != v) ++k;
    free_space_oracle o(datas[k]);
    if (opt.algo == "frechet2") return frechet_tester2(o, opt.epsilon, r);
    tester1_params params;
    params.t = opt.axis == "t" ? static_cast<long long>(v) : opt.t;
    params.eps = opt.epsilon;
    return frechet_tester1(o, params, r);
  };
  auto pts = harness::sweep_queries(values, opt.trials, seed, trial);

  if (opt.out == "-") {
    harness::write_sweep_csv(std::cout, pts);
  } else {
    std::ofstream f(opt.out);
    if (!f) throw parse_error("bench: cannot open " + opt.out);
    harness::write_sweep_csv(f, pts);
  }

  const double eps = opt.epsilon;
  std::function<double(double)> scale;
  if (opt.algo == "frechet2") {
    const double fixed_t = static_cast<double>(opt.t);
    scale = [=](double v) {
      const double tt = opt.axis == "t" ? v : fixed_t;
      const double nn = opt.axis == "n" ? v : static_cast<double>(opt.n);
      const double ll = std::log2(std::max(4.0, std::log2(std::max(4.0, tt))));
      return (tt * tt * tt + tt * tt * std::log2(nn)) * ll / eps;
    };
  } else {
    const double fixed_t = static_cast<double>(opt.t);
    scale = [=](double v) {
      const double tt = opt.axis == "t" ? v : fixed_t;
      return tt / eps * std::log2(tt / eps);
    };
  }
  harness::write_fit_table(std::cerr, opt.algo + "/" + opt.axis, pts, scale);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"free-space property testing toolkit"};
  app.require_subcommand(1);

  gen_options g;
  auto* gen_cmd = app.add_subcommand("gen", "generate curve files");
  gen_cmd->add_option("--recipe", g.recipe, "straight | near-pair | far-pair")
      ->required();
  gen_cmd->add_option("--n", g.n, "vertex count");
  gen_cmd->add_option("--dim", g.dim, "dimension (straight only)");
  gen_cmd->add_option("--delta", g.delta, "distance threshold / edge scale");
  gen_cmd->add_option("--eps", g.eps, "farness parameter (far-pair)");
  gen_cmd->add_option("--margin", g.margin, "far-pair displacement margin");
  gen_cmd->add_option("--edge-min", g.edge_min, "min edge length, x delta");
  gen_cmd->add_option("--edge-max", g.edge_max, "max edge length, x delta");
  gen_cmd->add_option("--max-turn", g.max_turn, "max turning angle, radians");
  gen_cmd->add_option("--seed", g.seed, "generator seed");
  gen_cmd->add_option("--out", g.out, "output curve file (.json or .csv)")
      ->required();
  gen_cmd->add_option("--out-q", g.out_q, "second output file (pairs)");

  test_options t;
  auto* test_cmd = app.add_subcommand("test", "run one tester");
  test_cmd
      ->add_option("--algo", t.algo,
                   "frechet1 | frechet2 | hausdorff | approx | reduced | "
                   "continuous")
      ->required();
  test_cmd->add_option("--matrix", t.matrix_file, "matrix file input");
  test_cmd->add_option("--p", t.p_file, "first curve file");
  test_cmd->add_option("--q", t.q_file, "second curve file");
  test_cmd->add_option("--delta", t.delta, "distance threshold");
  test_cmd->add_option("--epsilon", t.epsilon, "farness parameter");
  test_cmd->add_option("--t", t.t, "locality bound (omit to estimate)");
  test_cmd->add_option("--eps-prime", t.eps_prime,
                       "approximation parameter (reduced / continuous)");
  test_cmd->add_option("--alpha", t.alpha,
                       "longest edge bound (reduced; default: measured)");
  test_cmd->add_option("--gamma", t.gamma,
                       "edge lower-bound factor (reduced, with --t)");
  test_cmd->add_option("--seed", t.seed, "tester seed");

  std::string exact_p, exact_q;
  double exact_delta = 1.0;
  auto* exact_cmd =
      app.add_subcommand("exact", "exact reference values as JSON");
  exact_cmd->add_option("--p", exact_p, "first curve file")->required();
  exact_cmd->add_option("--q", exact_q, "second curve file")->required();
  exact_cmd->add_option("--delta", exact_delta, "distance threshold")
      ->required();

  bench_options b;
  auto* bench_cmd =
      app.add_subcommand("bench", "query sweeps as CSV (fit table on stderr)");
  bench_cmd->add_option("--algo", b.algo, "frechet1 | frechet2");
  bench_cmd->add_option("--axis", b.axis, "n | t");
  bench_cmd->add_option("--values", b.values, "axis values (comma-separated)")
      ->delimiter(',');
  bench_cmd->add_option("--trials", b.trials, "trials per value");
  bench_cmd->add_option("--n", b.n, "matrix size when axis != n");
  bench_cmd->add_option("--t", b.t, "locality bound when axis != t");
  bench_cmd->add_option("--epsilon", b.epsilon, "farness parameter");
  bench_cmd->add_option("--instance", b.instance,
                        "band | interior-barrier | banded-barrier");
  bench_cmd->add_option("--half-width", b.half_width, "band half-width");
  bench_cmd->add_option("--seed", b.seed, "base seed");
  bench_cmd->add_option("--out", b.out, "CSV path or - for stdout");

  std::uint64_t verify_seed = 0;
  long long verify_instances = 1000;
  auto* verify_cmd =
      app.add_subcommand("verify", "internal consistency suite");
  verify_cmd->add_option("--seed", verify_seed, "suite seed");
  verify_cmd->add_option("--instances", verify_instances,
                         "instances per check");

  try {
    app.parse(argc, argv);
    if (*gen_cmd) return run_gen(g);
    if (*test_cmd) return run_test(t);
    if (*exact_cmd) return run_exact(exact_p, exact_q, exact_delta);
    if (*bench_cmd) return run_bench(b);
    if (*verify_cmd) {
      harness::suite_result res = fsprobe::harness::verify_suite(
          std::cout, pick_seed(verify_seed), verify_instances);
      std::cout << "checks run: " << res.checks_run()
                << ", failures: " << res.failures() << '\n';
      return res.failures() == 0 ? 0 : 1;
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
