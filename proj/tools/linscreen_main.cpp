// linscreen: linear variable screening toolkit.
//
// Subcommands: gen, screen, check-rdd, check-ic, bounds, simulate, sweep,
// theorems. Structured data goes to files; diagnostics go to stderr; the only
// stdout print is the single number emitted by `bounds`.
//
// Exit codes: 0 success, 2 validation error (bad flags, dimension mismatch,
// violated hypothesis), 3 numerical error (singular Gram, covariance not
// positive definite, singular submatrix).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "linscreen/conditions.hpp"
#include "linscreen/experiments.hpp"
#include "linscreen/matrix_io.hpp"
#include "linscreen/serialization.hpp"

namespace ls = linscreen;

namespace {

int g_log_level = 1;  // 0 quiet, 1 info, 2 debug

void log_info(const std::string& message) {
  if (g_log_level >= 1) std::cerr << "linscreen: " << message << '\n';
}

std::vector<int> parse_index_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (field.empty()) continue;
    out.push_back(static_cast<int>(ls::parse_double(field)));
  }
  if (out.empty()) throw ls::BadParams("empty index list");
  return out;
}

std::vector<int> parse_sign_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) {
    if (field == "+" || field == "+1" || field == "1") {
      out.push_back(1);
    } else if (field == "-" || field == "-1") {
      out.push_back(-1);
    } else {
      throw ls::BadSigns("signs must be '+' or '-' (got '" + field + "')");
    }
  }
  return out;
}

ls::CovarianceSpec parse_covariance(const std::string& text, int p) {
  ls::CovarianceSpec spec;
  if (text == "identity") {
    spec = ls::CovarianceSpec::identity(p);
  } else if (text.rfind("equi:", 0) == 0) {
    spec = ls::CovarianceSpec::equicorrelated(p, ls::parse_double(text.substr(5)));
  } else if (text.rfind("ar1:", 0) == 0) {
    spec = ls::CovarianceSpec::ar1(p, ls::parse_double(text.substr(4)));
  } else if (text.rfind("custom:", 0) == 0) {
    spec = ls::CovarianceSpec::custom_matrix(ls::read_matrix_csv(text.substr(7)));
    if (spec.p != p) throw ls::BadParams("custom covariance dimension does not match --p");
  } else {
    throw ls::BadParams("covariance must be identity, equi:R, ar1:R or custom:file.csv");
  }
  return spec;
}

struct GenArgs {
  int p = 0;
  int n = 0;
  std::string cov = "identity";
  int s = 0;
  double tau = 1.0;
  double rho = 1.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out_prefix;
};

void run_gen(const GenArgs& args) {
  const ls::CovarianceSpec spec = parse_covariance(args.cov, args.p);
  const ls::CovarianceModel model = ls::materialize(spec);
  if (model.renormalized) {
    log_info("custom covariance diagonal drifted from 1; renormalized");
  }
  const ls::SeedPath base{args.seed, {}};
  const ls::DesignMatrix x = ls::sample_design(model, args.n, base.child(0));
  const ls::SparseCoefficients beta = ls::sample_beta(args.p, args.s, args.tau, args.rho,
                                                      base.child(1));
  const ls::Vector noise = ls::sample_noise(args.n, args.sigma, base.child(2));
  const ls::RegressionInstance instance = ls::assemble(x, beta, noise);

  ls::write_matrix_csv(x.values(), args.out_prefix + "_x.csv");
  ls::write_coefficients_csv(beta, args.out_prefix + "_beta.csv");
  ls::write_vector_csv(instance.response, args.out_prefix + "_y.csv");

  ls::Json meta;
  meta["p"] = args.p;
  meta["n"] = args.n;
  meta["covariance"] = ls::covariance_to_json(spec);
  meta["s"] = args.s;
  meta["tau"] = args.tau;
  meta["rho"] = args.rho;
  meta["sigma"] = args.sigma;
  meta["seed"] = args.seed;
  meta["seed_paths"] = ls::Json{{"design", {0}}, {"beta", {1}}, {"noise", {2}}};
  meta["kappa"] = model.kappa;
  meta["generator"] = "mt19937_64 + inverse normal cdf";
  meta["beta_distribution"] =
      "support uniform without replacement; |b| uniform on [tau, rho*tau]; signs uniform";
  meta["files"] = ls::Json{{"x", args.out_prefix + "_x.csv"},
                           {"beta", args.out_prefix + "_beta.csv"},
                           {"y", args.out_prefix + "_y.csv"}};
  ls::write_json(meta, args.out_prefix + "_meta.json");
  log_info("wrote " + args.out_prefix + "_{x,beta,y}.csv and _meta.json");
}

struct ScreenArgs {
  std::string x_path;
  std::string y_path;
  std::string method = "sis";
  bool standardize = false;
  std::optional<int> top_d;
  std::optional<double> gamma;
  bool emit_estimates = false;
  std::string out_path;
};

void run_screen(const ScreenArgs& args) {
  if (args.top_d.has_value() == args.gamma.has_value()) {
    throw ls::BadParams("exactly one of --top-d or --gamma is required");
  }
  ls::DesignMatrix x(ls::read_matrix_csv(args.x_path));
  const ls::Vector y = ls::read_vector_csv(args.y_path);
  if (args.standardize) x = ls::standardize(x);

  ls::Vector beta_hat;
  if (args.method == "sis") {
    beta_hat = ls::sis_estimate(x, y);
  } else if (args.method == "holp") {
    beta_hat = ls::holp_estimate(x, y);
  } else {
    throw ls::BadParams("--method must be sis or holp");
  }

  const ls::SelectionRule rule = args.top_d ? ls::SelectionRule(ls::TopD{*args.top_d})
                                            : ls::SelectionRule(ls::Threshold{*args.gamma});
  const ls::Submodel chosen = ls::select(beta_hat, rule);

  ls::Json j;
  j["method"] = args.method;
  if (args.top_d) {
    j["rule"] = ls::Json{{"kind", "top_d"}, {"d", *args.top_d}};
  } else {
    j["rule"] = ls::Json{{"kind", "threshold"}, {"gamma", *args.gamma}};
  }
  j["indices"] = chosen.indices;
  if (args.emit_estimates) {
    std::vector<double> est(beta_hat.data(), beta_hat.data() + beta_hat.size());
    j["estimates"] = est;
  }
  j["inputs"] = ls::Json{{"x", args.x_path},
                         {"y", args.y_path},
                         {"x_fingerprint", x.fingerprint()},
                         {"standardized", args.standardize}};
  ls::write_json(j, args.out_path);
  log_info("selected " + std::to_string(chosen.indices.size()) + " indices");
}

struct CheckRddArgs {
  std::string phi_path;
  int s = 0;
  double c0 = 1.0;
  double shift = 0.0;
  bool brute_force = false;
  std::string out_path;
};

void run_check_rdd(const CheckRddArgs& args) {
  const ls::Matrix phi_values = ls::read_matrix_csv(args.phi_path);
  const ls::ScreeningMatrix phi(phi_values, args.shift);
  const ls::RddReport report = args.brute_force ? ls::rdd_brute_force(phi, args.s, args.c0)
                                                : ls::rdd_check(phi, args.s, args.c0);
  ls::Json j = ls::rdd_report_to_json(report);
  j["shift"] = args.shift;
  j["brute_force"] = args.brute_force;
  j["phi"] = args.phi_path;
  j["phi_fingerprint"] = ls::fnv1a(
      phi_values.data(), sizeof(double) * static_cast<std::size_t>(phi_values.size()));
  ls::write_json(j, args.out_path);
  log_info(std::string("restricted diagonal dominance ") +
           (report.holds ? "holds" : "fails") + ", margin " + std::to_string(report.margin));
}

struct CheckIcArgs {
  std::string gram_path;
  std::string support;
  std::string signs;
  bool worst_case = false;
  std::string out_path;
};

void run_check_ic(const CheckIcArgs& args) {
  if (args.worst_case == !args.signs.empty()) {
    throw ls::BadParams("exactly one of --signs or --worst-case is required");
  }
  const ls::Matrix gram = ls::read_matrix_csv(args.gram_path);
  const std::vector<int> support = parse_index_list(args.support);
  const ls::IcReport report = args.worst_case
                                  ? ls::ic_worst_case(gram, support)
                                  : ls::ic_check(gram, support, parse_sign_list(args.signs));
  ls::Json j = ls::ic_report_to_json(report);
  j["gram"] = args.gram_path;
  j["gram_fingerprint"] =
      ls::fnv1a(gram.data(), sizeof(double) * static_cast<std::size_t>(gram.size()));
  ls::write_json(j, args.out_path);
  log_info("irrepresentable value " + std::to_string(report.value));
}

struct BoundsArgs {
  std::string method;
  std::string params_path;
};

void run_bounds(const BoundsArgs& args) {
  std::ifstream in(args.params_path);
  if (!in) throw ls::BadParams("cannot open params '" + args.params_path + "'");
  ls::Json params;
  try {
    in >> params;
  } catch (const ls::Json::exception& err) {
    throw ls::BadParams(std::string("params file is not valid JSON: ") + err.what());
  }
  double value = 0.0;
  try {
    if (args.method == "sis") {
      value = ls::sis_sample_bound(params.value("K", 1.0), params.at("rho").get<double>(),
                                   params.at("s").get<int>(), params.at("sigma").get<double>(),
                                   params.at("tau").get<double>(), params.at("r").get<double>(),
                                   params.at("p").get<int>(), params.at("delta").get<double>());
    } else if (args.method == "holp") {
      value = ls::holp_sample_bound(
          params.value("Cprime", 1.0), params.at("kappa").get<double>(),
          params.at("rho").get<double>(), params.at("s").get<int>(),
          params.at("sigma").get<double>(), params.at("tau").get<double>(),
          params.at("p").get<int>(), params.at("delta").get<double>(), params.value("c0", 2.0),
          params.value("C", 1.0));
    } else {
      throw ls::BadParams("--method must be sis or holp");
    }
  } catch (const ls::Json::exception& err) {
    throw ls::BadParams(std::string("params error: ") + err.what());
  }
  std::cout << ls::format_double(value) << '\n';
}

struct SimulateArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

void run_simulate(const SimulateArgs& args) {
  ls::ExperimentConfig config = ls::load_config(args.config_path);
  if (args.seed_override) config.seed = *args.seed_override;
  const ls::SweepSummary summary = ls::sweep(config, args.threads);
  ls::write_trials_jsonl(summary.config, summary.trials, args.out_path);
  log_info("wrote " + std::to_string(summary.trials.size()) + " trial results");
}

struct SweepArgs {
  std::string config_path;
  std::string out_path;
  std::string trials_path;
  std::string gnuplot_path;
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

void run_sweep(const SweepArgs& args) {
  ls::ExperimentConfig config = ls::load_config(args.config_path);
  if (args.seed_override) config.seed = *args.seed_override;
  const ls::SweepSummary summary = ls::sweep(config, args.threads);
  ls::write_summary_csv(summary, args.out_path);
  if (!args.trials_path.empty()) {
    ls::write_trials_jsonl(summary.config, summary.trials, args.trials_path);
  }
  if (!args.gnuplot_path.empty()) ls::write_gnuplot(summary, args.gnuplot_path);
  log_info("wrote summary for " + std::to_string(summary.cells.size()) + " cells");
}

struct TheoremArgs {
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_theorems(const TheoremArgs& args) {
  const ls::PropertyReport report = ls::run_property_suite(args.seed);
  ls::write_json(ls::property_report_to_json(report), args.out_path);
  for (const auto& check : report.checks) {
    log_info(check.name + ": " + std::to_string(check.trials - check.failures) + "/" +
             std::to_string(check.trials) + " ok");
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linscreen: linear variable screening toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string log_level = "info";
  app.add_option("--log-level", log_level, "quiet|info|debug")->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded regression instance");
  gen_cmd->fallthrough();
  gen_cmd->add_option("--p", gen.p, "predictors")->required();
  gen_cmd->add_option("--n", gen.n, "observations")->required();
  gen_cmd->add_option("--cov", gen.cov, "identity|equi:R|ar1:R|custom:file.csv")
      ->capture_default_str();
  gen_cmd->add_option("--s", gen.s, "support size")->required();
  gen_cmd->add_option("--tau", gen.tau, "minimum signal")->capture_default_str();
  gen_cmd->add_option("--rho", gen.rho, "magnitude ratio bound")->capture_default_str();
  gen_cmd->add_option("--sigma", gen.sigma, "noise standard deviation")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "master seed")->required();
  gen_cmd->add_option("--out-prefix", gen.out_prefix, "output file prefix")->required();

  ScreenArgs screen;
  auto* screen_cmd = app.add_subcommand("screen", "run a linear screener on CSV data");
  screen_cmd->fallthrough();
  screen_cmd->add_option("--x", screen.x_path, "design matrix CSV")->required();
  screen_cmd->add_option("--y", screen.y_path, "response CSV")->required();
  screen_cmd->add_option("--method", screen.method, "sis|holp")->required();
  screen_cmd->add_flag("--standardize", screen.standardize, "standardize columns first");
  int top_d_value = -1;
  double gamma_value = -1.0;
  auto* top_d_opt = screen_cmd->add_option("--top-d", top_d_value, "keep the d largest estimates");
  auto* gamma_opt = screen_cmd->add_option("--gamma", gamma_value, "keep estimates above gamma");
  screen_cmd->add_flag("--emit-estimates", screen.emit_estimates, "include full estimate vector");
  screen_cmd->add_option("--out", screen.out_path, "output JSON")->required();

  CheckRddArgs check_rdd;
  auto* rdd_cmd = app.add_subcommand("check-rdd", "restricted diagonal dominance check");
  rdd_cmd->fallthrough();
  rdd_cmd->add_option("--phi", check_rdd.phi_path, "screening matrix CSV")->required();
  rdd_cmd->add_option("--s", check_rdd.s, "sparsity")->required();
  rdd_cmd->add_option("--c0", check_rdd.c0, "dominance constant (>= 1)")->required();
  rdd_cmd->add_option("--shift", check_rdd.shift, "diagonal shift")->capture_default_str();
  rdd_cmd->add_flag("--brute-force", check_rdd.brute_force, "literal subset enumeration");
  rdd_cmd->add_option("--out", check_rdd.out_path, "output JSON")->required();

  CheckIcArgs check_ic;
  auto* ic_cmd = app.add_subcommand("check-ic", "irrepresentable condition check");
  ic_cmd->fallthrough();
  ic_cmd->add_option("--gram", check_ic.gram_path, "gram matrix CSV")->required();
  ic_cmd->add_option("--support", check_ic.support, "1-based support, e.g. 1,4,7")->required();
  ic_cmd->add_option("--signs", check_ic.signs,
                     "sign vector, e.g. +,-,+ (write --signs=-,+ when it starts with -)");
  ic_cmd->add_flag("--worst-case", check_ic.worst_case, "maximize over sign vectors");
  ic_cmd->add_option("--out", check_ic.out_path, "output JSON")->required();

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate a sample-size bound");
  bounds_cmd->fallthrough();
  bounds_cmd->add_option("--method", bounds.method, "sis|holp")->required();
  bounds_cmd->add_option("--params", bounds.params_path, "JSON parameter file")->required();

  SimulateArgs simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "run Monte Carlo trials to JSONL");
  sim_cmd->fallthrough();
  sim_cmd->add_option("--config", simulate.config_path, "experiment config JSON")->required();
  sim_cmd->add_option("--out", simulate.out_path, "output JSONL")->required();
  std::uint64_t sim_seed = 0;
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "override config seed");
  sim_cmd->add_option("--threads", simulate.threads, "worker threads (0 = auto)")
      ->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "aggregate a Monte Carlo sweep");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("--config", sweep_args.config_path, "experiment config JSON")->required();
  sweep_cmd->add_option("--out", sweep_args.out_path, "summary CSV")->required();
  sweep_cmd->add_option("--out-trials", sweep_args.trials_path, "per-trial JSONL");
  sweep_cmd->add_option("--emit-gnuplot", sweep_args.gnuplot_path, "gnuplot script");
  std::uint64_t sweep_seed = 0;
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "override config seed");
  sweep_cmd->add_option("--threads", sweep_args.threads, "worker threads (0 = auto)")
      ->capture_default_str();

  TheoremArgs theorems;
  auto* thm_cmd = app.add_subcommand("theorems", "randomized checks of the consistency theory");
  thm_cmd->fallthrough();
  thm_cmd->add_option("--seed", theorems.seed, "master seed")->required();
  thm_cmd->add_option("--out", theorems.out_path, "output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (log_level == "quiet") {
    g_log_level = 0;
  } else if (log_level == "debug") {
    g_log_level = 2;
  } else if (log_level == "info") {
    g_log_level = 1;
  } else {
    std::cerr << "linscreen: unknown log level '" << log_level << "'\n";
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      run_gen(gen);
    } else if (screen_cmd->parsed()) {
      if (top_d_opt->count()) screen.top_d = top_d_value;
      if (gamma_opt->count()) screen.gamma = gamma_value;
      run_screen(screen);
    } else if (rdd_cmd->parsed()) {
      run_check_rdd(check_rdd);
    } else if (ic_cmd->parsed()) {
      run_check_ic(check_ic);
    } else if (bounds_cmd->parsed()) {
      run_bounds(bounds);
    } else if (sim_cmd->parsed()) {
      if (sim_seed_opt->count()) simulate.seed_override = sim_seed;
      run_simulate(simulate);
    } else if (sweep_cmd->parsed()) {
      if (sweep_seed_opt->count()) sweep_args.seed_override = sweep_seed;
      run_sweep(sweep_args);
    } else if (thm_cmd->parsed()) {
      return run_theorems(theorems);
    }
  } catch (const ls::ValidationError& err) {
    std::cerr << "linscreen: validation error: " << err.what() << '\n';
    return 2;
  } catch (const ls::NumericalError& err) {
    std::cerr << "linscreen: numerical error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "linscreen: error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
