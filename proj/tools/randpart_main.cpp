#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "randpart/asymptotics.hpp"
#include "randpart/emit.hpp"
#include "randpart/experiments.hpp"
#include "randpart/kfree.hpp"
#include "randpart/rng.hpp"
#include "randpart/set_partition.hpp"
#include "randpart/stirling.hpp"

namespace {

using namespace randpart;

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty() || text[0] == '-')
    throw std::invalid_argument("--seed expects a nonnegative 64-bit integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 0);  // decimal or 0x-hex
  if (errno != 0 || end == text.c_str() || *end != '\0')
    throw std::invalid_argument("cannot parse --seed '" + text + "' as a 64-bit integer");
  return value;
}

// --check EXPECTED --tol T turns a run into an assertion (exit 2 on miss).
struct CheckFlags {
  std::optional<double> expected;
  double tolerance = 0.0;

  int apply(double value) const {
    if (!expected) return 0;
    if (std::abs(value - *expected) <= tolerance) return 0;
    std::fprintf(stderr, "check failed: got %s, expected %s +/- %s\n",
                 format_sig12(value).c_str(), format_sig12(*expected).c_str(),
                 format_sig12(tolerance).c_str());
    return 2;
  }
};

void add_check_flags(CLI::App* cmd, CheckFlags& check) {
  cmd->add_option("--check", check.expected,
                  "assert the result equals this value (exit 2 otherwise)");
  cmd->add_option("--tol", check.tolerance, "absolute tolerance for --check");
}

int write_output(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(payload.c_str(), stdout);
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  file << payload;
  if (!file.good()) {
    std::fprintf(stderr, "error: write to %s failed\n", out_path.c_str());
    return 1;
  }
  return 0;
}

// ---- numeric ---------------------------------------------------------------

struct NumericArgs {
  double c = 0.0;
  std::vector<double> scan;  // A B STEPS
  CheckFlags check;
  CLI::Option* c_option = nullptr;
};

int run_numeric_curve(const std::string& name, const std::function<double(double)>& curve,
                      const NumericArgs& args) {
  if (!args.scan.empty()) {
    if (args.check.expected) {
      std::fprintf(stderr, "error: --check does not combine with --scan\n");
      return 1;
    }
    const double a = args.scan[0];
    const double b = args.scan[1];
    const auto steps = static_cast<std::uint64_t>(args.scan[2]);
    if (steps < 2 || b <= a) {
      std::fprintf(stderr, "error: --scan needs A < B and STEPS >= 2\n");
      return 1;
    }
    std::string out = "c," + name + "\n";
    for (std::uint64_t i = 0; i < steps; ++i) {
      const double c = a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1);
      out += format_sig12(c);
      out.push_back(',');
      out += format_sig12(curve(c));
      out.push_back('\n');
    }
    std::fputs(out.c_str(), stdout);
    return 0;
  }
  if (!args.c_option->count()) {
    std::fprintf(stderr, "error: need --c VALUE or --scan A B STEPS\n");
    return 1;
  }
  const double value = curve(args.c);
  std::printf("%s\n", format_sig12(value).c_str());
  return args.check.apply(value);
}

// ---- verify ----------------------------------------------------------------

struct VerifyCounter {
  int checks = 0;
  int failures = 0;

  void expect(bool ok, const std::string& label) {
    ++checks;
    if (!ok) {
      ++failures;
      std::printf("FAIL %s\n", label.c_str());
    }
  }

  int report(const std::string& suite) {
    std::printf("%s: %d checks, %d failures\n", suite.c_str(), checks, failures);
    return failures == 0 ? 0 : 2;
  }
};

int verify_stirling() {
  VerifyCounter counter;
  for (std::uint32_t n = 3; n <= 300; ++n)
    counter.expect(check_log_concavity(n), "log-concavity n=" + std::to_string(n));
  for (std::uint32_t k = 2; k <= 300; ++k)
    for (std::uint32_t l = 2; l <= k; ++l) {
      counter.expect(check_ratio_bound(k, l),
                     "ratio bound k=" + std::to_string(k) + " l=" + std::to_string(l));
      const bool rough =
          2 * stirling_exact(k, l - 1) <= mpz_class(k) * k * stirling_exact(k, l);
      counter.expect(rough, "rough bound k=" + std::to_string(k) + " l=" + std::to_string(l));
    }
  for (std::uint32_t n = 1; n <= 30; ++n) {
    mpz_class row_sum = 0;
    for (std::uint32_t k = 0; k <= n; ++k) row_sum += stirling_exact(n, k);
    counter.expect(row_sum == bell_number(n), "Bell row sum n=" + std::to_string(n));
  }
  return counter.report("verify stirling");
}

SetPartition random_partition(std::uint32_t n, Xoshiro256StarStar& rng) {
  std::vector<std::uint32_t> labels(n, 0);
  std::uint32_t prefix_max = 0;
  for (std::uint32_t i = 1; i < n; ++i) {
    labels[i] = static_cast<std::uint32_t>(rng.below(prefix_max + 2));
    prefix_max = std::max(prefix_max, labels[i]);
  }
  return SetPartition::from_labels(std::move(labels));
}

int verify_lattice() {
  VerifyCounter counter;
  Xoshiro256StarStar rng(0);
  for (int round = 0; round < 10000; ++round) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(8));
    const SetPartition p = random_partition(n, rng);
    const SetPartition q = random_partition(n, rng);
    const SetPartition r = random_partition(n, rng);
    const std::string tag = " round=" + std::to_string(round);

    counter.expect(meet(p, q) == meet(q, p), "meet commutative" + tag);
    counter.expect(join(p, q) == join(q, p), "join commutative" + tag);
    counter.expect(meet(p, meet(q, r)) == meet(meet(p, q), r), "meet associative" + tag);
    counter.expect(join(p, join(q, r)) == join(join(p, q), r), "join associative" + tag);
    counter.expect(join(p, meet(p, q)) == p, "absorption join-meet" + tag);
    counter.expect(meet(p, join(p, q)) == p, "absorption meet-join" + tag);
    counter.expect(meet(p, p) == p && join(p, p) == p, "idempotence" + tag);

    const SetPartition low = meet(p, q);
    const SetPartition high = join(p, q);
    counter.expect(refines(low, p) && refines(low, q), "meet below factors" + tag);
    counter.expect(refines(p, high) && refines(q, high), "factors below join" + tag);
    const bool order = refines(p, q);
    counter.expect(order == (low == p), "order matches meet" + tag);
    counter.expect(order == (high == q), "order matches join" + tag);
    counter.expect(refines(SetPartition::singletons(n), p) &&
                       refines(p, SetPartition::one_block(n)),
                   "lattice bounds" + tag);
  }
  return counter.report("verify lattice");
}

int verify_kfree() {
  VerifyCounter counter;
  for (std::uint32_t n = 3; n <= 10; ++n) {
    std::uint64_t scanned = 0;
    std::uint64_t lemma_failures = 0;
    for_each_partition(n, [&](const std::vector<std::uint32_t>& labels) {
      const SetPartition p = SetPartition::from_labels(labels);
      for (std::uint32_t a = 1; a + 1 < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b) {
          ++scanned;
          if (!verify_kfree_properties(p, a, b).all_applicable_hold()) ++lemma_failures;
        }
    });
    counter.expect(lemma_failures == 0, "k-free lemmas n=" + std::to_string(n) + " (" +
                                            std::to_string(scanned) + " scans)");
  }
  return counter.report("verify kfree");
}

int verify_oracle() {
  VerifyCounter counter;
  Xoshiro256StarStar rng(0);
  for (int round = 0; round < 1000; ++round) {
    const auto n = static_cast<std::uint32_t>(1 + rng.below(64));
    const auto t = static_cast<std::uint32_t>(1 + rng.below(4));
    std::vector<std::vector<std::uint32_t>> maps(t, std::vector<std::uint32_t>(n));
    for (auto& f : maps)
      for (auto& v : f) v = static_cast<std::uint32_t>(rng.below(n));
    counter.expect(graph_components_oracle(n, maps) == join_streaming(n, maps),
                   "graph oracle vs join round=" + std::to_string(round));
  }
  for (int i = 1; i < 1000; ++i) {
    const double c = static_cast<double>(i) / 1000.0;
    counter.expect(solve_gamma(c).residual <= 1e-12, "gamma residual c=" + format_sig12(c));
    const double x = x_of_c(c);
    const double residual = std::abs(2.0 * x - std::exp(1.0) * (c - x) * (c - x));
    counter.expect(residual <= 1e-12, "x residual c=" + format_sig12(c));
  }
  return counter.report("verify oracle");
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::uint64_t n = 1;
  std::uint64_t t = 1;
  std::uint64_t t_max = 0;
  std::uint64_t trials = 1000;
  std::string seed_text = "0";
  std::uint32_t threads = 1;
  std::string format = "csv";
  std::string out_path;
  std::vector<double> thresholds;
  CheckFlags check;
};

int run_simulate(ExperimentKind kind, const SimulateArgs& args) {
  ExperimentConfig config;
  config.kind = kind;
  config.n = static_cast<std::uint32_t>(args.n);
  config.t = static_cast<std::uint32_t>(args.t);
  config.t_max = static_cast<std::uint32_t>(args.t_max);
  config.trials = args.trials;
  config.master_seed = parse_seed(args.seed_text);
  config.worker_count = args.threads;
  config.thresholds = args.thresholds;

  std::vector<EstimateResult> results;
  if (kind == ExperimentKind::threshold_scan) {
    results = run_threshold_scan(config);
  } else {
    results.push_back(run_experiment(config));
  }

  for (const EstimateResult& result : results)
    std::fprintf(stderr,
                 "%s n=%u t=%u trials=%" PRIu64 " estimate=%s stderr=%s elapsed=%.0fms\n",
                 kind_name(kind).c_str(), result.config.n, result.config.t, result.trials,
                 format_sig12(result.point_estimate).c_str(),
                 format_sig12(result.std_error).c_str(), result.elapsed_ms);

  if (!args.out_path.empty()) zero_elapsed(results);  // files stay byte-reproducible
  const std::string payload = args.format == "json" ? emit_json(results) : emit_csv(results);
  const int io_status = write_output(payload, args.out_path);
  if (io_status != 0) return io_status;
  return args.check.apply(results.back().point_estimate);
}

void add_simulate_options(CLI::App* cmd, SimulateArgs& args, ExperimentKind kind) {
  cmd->add_option("--n", args.n, "ground-set size")
      ->required()
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 31));
  cmd->add_option("--t", args.t, kind == ExperimentKind::threshold_scan
                                     ? "start of the t range"
                                     : "number of maps")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 31));
  if (kind == ExperimentKind::threshold_scan)
    cmd->add_option("--t-max", args.t_max, "inclusive end of the t range")->required();
  cmd->add_option("--trials", args.trials, "Monte Carlo trials")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  cmd->add_option("--seed", args.seed_text, "master seed (decimal or 0x-hex)");
  cmd->add_option("--threads", args.threads, "worker threads")->check(CLI::Range(1u, 256u));
  cmd->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", args.out_path, "write results to this file instead of stdout");
  if (kind == ExperimentKind::largest_block)
    cmd->add_option("--threshold", args.thresholds,
                    "absolute L cutoffs reported as frac_ge extras (default n/3)");
  if (kind != ExperimentKind::threshold_scan) add_check_flags(cmd, args.check);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partition lattice of random maps: exact values, numeric curves, simulations"};
  app.require_subcommand(1);

  // exact -----------------------------------------------------------------
  auto* exact = app.add_subcommand("exact", "closed-form and big-integer values");
  exact->require_subcommand(1);

  auto* exact_stirling = exact->add_subcommand("stirling", "Stirling number of the second kind");
  std::uint64_t stirling_n = 0, stirling_k = 0;
  bool stirling_use_log = false;
  CheckFlags stirling_check;
  exact_stirling->add_option("--n", stirling_n, "row")->required();
  exact_stirling->add_option("--k", stirling_k, "blocks")->required();
  exact_stirling->add_flag("--log", stirling_use_log, "emit log S(n,k) instead of the integer");
  add_check_flags(exact_stirling, stirling_check);

  auto* exact_inf_min = exact->add_subcommand(
      "inf-min", "P(inf of t map-partitions = p_min), the injectivity product");
  std::uint64_t inf_n = 1, inf_t = 1;
  CheckFlags inf_check;
  exact_inf_min->add_option("--n", inf_n, "ground-set size")->required();
  exact_inf_min->add_option("--t", inf_t, "number of maps")->required();
  add_check_flags(exact_inf_min, inf_check);

  auto* exact_moments =
      exact->add_subcommand("moments", "E[M], E[C(M,2)], Var(M) for the sup's singleton count");
  std::uint64_t moments_n = 1, moments_t = 1;
  exact_moments->add_option("--n", moments_n, "ground-set size")->required();
  exact_moments->add_option("--t", moments_t, "number of maps")->required();

  // numeric ---------------------------------------------------------------
  auto* numeric = app.add_subcommand("numeric", "exponent curves and bound functions");
  numeric->require_subcommand(1);

  struct Curve {
    const char* name;
    const char* blurb;
    std::function<double(double)> fn;
    NumericArgs args;
    CLI::App* cmd = nullptr;
  };
  Curve curves[] = {
      {"gamma", "root of gamma(1 - e^{-1/gamma}) = c",
       [](double c) { return solve_gamma(c).gamma; }, {}, nullptr},
      {"g", "Stirling growth exponent g(c)", [](double c) { return g_of_c(c); }, {}, nullptr},
      {"entropy", "binary entropy H(c), nats", [](double c) { return entropy_H(c); }, {}, nullptr},
      {"x", "smallest root of 2x = e(c-x)^2", [](double c) { return x_of_c(c); }, {}, nullptr},
      {"mu4", "t=4 largest-block exponent", [](double c) { return mu4(c); }, {}, nullptr},
      {"lambda4", "H(c) + 4 mu4(c)", [](double c) { return lambda4(c); }, {}, nullptr},
      {"mu3", "t=3 largest-block exponent", [](double c) { return mu3(c); }, {}, nullptr},
  };
  for (Curve& curve : curves) {
    curve.cmd = numeric->add_subcommand(curve.name, curve.blurb);
    curve.args.c_option = curve.cmd->add_option("--c", curve.args.c, "abscissa");
    curve.cmd->add_option("--scan", curve.args.scan, "A B STEPS: evenly spaced scan, CSV out")
        ->expected(3);
    add_check_flags(curve.cmd, curve.args.check);
  }

  auto* lambda4_cmd =
      numeric->add_subcommand("lambda4-interval", "sign-change abscissae of lambda4");

  auto* fkl = numeric->add_subcommand("fkl", "log f_k(l) = log n^{l-n} S(k,l) (n-l)^{n-k}");
  std::uint64_t fkl_n = 0, fkl_k = 0, fkl_l = 0;
  CheckFlags fkl_check;
  fkl->add_option("--n", fkl_n, "ground-set size")->required();
  fkl->add_option("--k", fkl_k, "domain size")->required();
  fkl->add_option("--l", fkl_l, "block count")->required();
  add_check_flags(fkl, fkl_check);

  auto* stk = numeric->add_subcommand("stk", "log s_t(k) = log n^{k-t} S(t,k) (1-k/n)^t");
  std::uint64_t stk_n = 0, stk_t = 0, stk_k = 0;
  CheckFlags stk_check;
  stk->add_option("--n", stk_n, "ground-set size")->required();
  stk->add_option("--t", stk_t, "number of maps")->required();
  stk->add_option("--k", stk_k, "block count")->required();
  add_check_flags(stk, stk_check);

  // simulate ----------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo experiments");
  simulate->require_subcommand(1);
  struct SimEntry {
    ExperimentKind kind;
    const char* blurb;
    SimulateArgs args;
    CLI::App* cmd = nullptr;
  };
  SimEntry sims[] = {
      {ExperimentKind::inf_min, "P(inf of t map-partitions = p_min)", {}, nullptr},
      {ExperimentKind::sup_max, "P(sup of t map-partitions = p_max)", {}, nullptr},
      {ExperimentKind::singletons, "singleton blocks M of the sup", {}, nullptr},
      {ExperimentKind::two_blocks, "two-element blocks |A| of the inf (t=2)", {}, nullptr},
      {ExperimentKind::largest_block, "largest block L of the sup", {}, nullptr},
      {ExperimentKind::threshold_scan, "sup-max swept over t in [--t, --t-max]", {}, nullptr},
  };
  for (SimEntry& entry : sims) {
    entry.cmd = simulate->add_subcommand(kind_name(entry.kind), entry.blurb);
    add_simulate_options(entry.cmd, entry.args, entry.kind);
  }

  // verify --------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "inequality sweeps and structural property suites");
  verify->require_subcommand(1);
  auto* verify_all_cmd = verify->add_subcommand("all", "every suite below");
  auto* verify_stirling_cmd =
      verify->add_subcommand("stirling", "log-concavity, ratio bounds, Bell sums (n <= 300)");
  auto* verify_lattice_cmd =
      verify->add_subcommand("lattice", "lattice laws on random triples (n <= 8)");
  auto* verify_kfree_cmd =
      verify->add_subcommand("kfree", "exhaustive k-free lemma scan (n <= 10)");
  auto* verify_oracle_cmd =
      verify->add_subcommand("oracle", "graph-component oracle vs join; root-finder residuals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 1;
  }

  try {
    if (exact_stirling->parsed()) {
      const auto n = static_cast<std::uint32_t>(stirling_n);
      const auto k = static_cast<std::uint32_t>(stirling_k);
      if (stirling_use_log) {
        const double value = stirling_log(n, k);
        std::printf("%s\n", format_sig12(value).c_str());
        return stirling_check.apply(value);
      }
      const mpz_class value = stirling_exact(n, k);
      std::printf("%s\n", value.get_str().c_str());
      return stirling_check.apply(value.get_d());
    }
    if (exact_inf_min->parsed()) {
      const double value = exact_inf_min_prob(static_cast<std::uint32_t>(inf_n),
                                              static_cast<std::uint32_t>(inf_t));
      std::printf("%s\n", format_sig12(value).c_str());
      return inf_check.apply(value);
    }
    if (exact_moments->parsed()) {
      const auto n = static_cast<std::uint32_t>(moments_n);
      const auto t = static_cast<std::uint32_t>(moments_t);
      std::printf("n,t,e_m,e_pairs,var_m\n%u,%u,%s,%s,%s\n", n, t,
                  format_sig12(exact_E_M(n, t)).c_str(),
                  format_sig12(exact_E_M_pairs(n, t)).c_str(),
                  format_sig12(exact_var_M(n, t)).c_str());
      return 0;
    }

    for (auto& curve : curves)
      if (curve.cmd->parsed()) return run_numeric_curve(curve.name, curve.fn, curve.args);
    if (lambda4_cmd->parsed()) {
      const Interval interval = lambda4_negative_interval();
      std::printf("lower,upper\n%s,%s\n", format_sig12(interval.lower).c_str(),
                  format_sig12(interval.upper).c_str());
      return 0;
    }
    if (fkl->parsed()) {
      const double value =
          f_k_l_log(static_cast<std::uint32_t>(fkl_n), static_cast<std::uint32_t>(fkl_k),
                    static_cast<std::uint32_t>(fkl_l));
      std::printf("%s\n", format_sig12(value).c_str());
      return fkl_check.apply(value);
    }
    if (stk->parsed()) {
      const double value =
          s_t_k_log(static_cast<std::uint32_t>(stk_n), static_cast<std::uint32_t>(stk_t),
                    static_cast<std::uint32_t>(stk_k));
      std::printf("%s\n", format_sig12(value).c_str());
      return stk_check.apply(value);
    }

    for (SimEntry& entry : sims)
      if (entry.cmd->parsed()) return run_simulate(entry.kind, entry.args);

    if (verify_all_cmd->parsed()) {
      int status = 0;
      status = std::max(status, verify_stirling());
      status = std::max(status, verify_lattice());
      status = std::max(status, verify_kfree());
      status = std::max(status, verify_oracle());
      return status;
    }
    if (verify_stirling_cmd->parsed()) return verify_stirling();
    if (verify_lattice_cmd->parsed()) return verify_lattice();
    if (verify_kfree_cmd->parsed()) return verify_kfree();
    if (verify_oracle_cmd->parsed()) return verify_oracle();
  } catch (const std::exception& error) {
    std::fprintf(stderr, "error: %s\n", error.what());
    return 1;
  }

  std::fprintf(stderr, "error: no subcommand handled\n");
  return 1;
}
