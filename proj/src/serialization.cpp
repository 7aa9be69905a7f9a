#include "linscreen/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "linscreen/matrix_io.hpp"

namespace linscreen {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw BadParams("cannot open '" + path + "' for writing");
  return out;
}

Json c0_max_to_json(double v) {
  if (v == kInf) return Json("unbounded");
  if (v == -kInf) return Json("infeasible");
  return Json(v);
}

}  // namespace

std::string bound_to_string(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return format_double(v);
}

Json rdd_report_to_json(const RddReport& report) {
  Json j;
  j["holds"] = report.holds;
  j["sparsity"] = report.sparsity;
  j["c0"] = report.c0_required;
  j["c0_max"] = c0_max_to_json(report.c0_max);
  j["margin"] = report.margin;
  if (report.witness) {
    j["witness"] = Json{{"i", report.witness->i},
                        {"k", report.witness->k},
                        {"index_set", report.witness->index_set}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json ic_report_to_json(const IcReport& report) {
  Json j;
  j["value"] = report.value;
  j["theta_max"] = report.theta_max;
  j["sign_mode"] = report.sign_mode == SignMode::Fixed ? "fixed" : "worst_case";
  j["support"] = report.support;
  if (report.sign_mode == SignMode::Fixed) j["signs"] = report.signs;
  return j;
}

Json trial_to_json(const TrialResult& trial) {
  Json j;
  j["trial"] = trial.trial;
  j["n"] = trial.n;
  j["seed_path"] = trial.seed_path;
  Json methods = Json::object();
  for (const auto& [method, outcome] : trial.methods) {
    methods[screener_name(method)] = Json{{"strong", outcome.strong},
                                          {"ordering_ok", outcome.ordering_ok},
                                          {"signs_ok", outcome.signs_ok},
                                          {"separation", outcome.separation}};
  }
  j["methods"] = methods;
  if (!trial.rdd.empty()) {
    Json rdd = Json::object();
    for (const auto& [method, report] : trial.rdd) {
      rdd[screener_name(method)] = rdd_report_to_json(report);
    }
    j["rdd"] = rdd;
  }
  if (!trial.errors.empty()) {
    Json errors = Json::object();
    for (const auto& [method, message] : trial.errors) {
      errors[screener_name(method)] = message;
    }
    j["errors"] = errors;
  }
  return j;
}

Json property_report_to_json(const PropertyReport& report) {
  Json checks = Json::array();
  for (const auto& check : report.checks) {
    checks.push_back(Json{{"name", check.name},
                          {"trials", check.trials},
                          {"failures", check.failures},
                          {"detail", check.detail}});
  }
  return Json{{"seed", report.seed}, {"checks", checks}, {"all_passed", report.all_passed()}};
}

Json covariance_to_json(const CovarianceSpec& spec) {
  Json j;
  j["kind"] = covariance_kind_name(spec.kind);
  j["p"] = spec.p;
  if (spec.kind == CovarianceKind::Equicorrelated || spec.kind == CovarianceKind::Ar1) {
    j["r"] = spec.r;
  }
  if (spec.kind == CovarianceKind::Custom) j["note"] = "custom matrix supplied externally";
  return j;
}

CovarianceSpec covariance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw BadParams("covariance spec needs a 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  CovarianceSpec spec;
  if (kind == "identity") {
    spec.kind = CovarianceKind::Identity;
  } else if (kind == "equicorrelated") {
    spec.kind = CovarianceKind::Equicorrelated;
    spec.r = j.at("r").get<double>();
  } else if (kind == "ar1") {
    spec.kind = CovarianceKind::Ar1;
    spec.r = j.at("r").get<double>();
  } else if (kind == "custom") {
    spec.kind = CovarianceKind::Custom;
    spec.custom = read_matrix_csv(j.at("file").get<std::string>());
  } else {
    throw BadParams("unknown covariance kind '" + kind + "'");
  }
  return spec;
}

Json config_to_json(const ExperimentConfig& config) {
  Json j;
  j["p"] = config.p;
  j["n_grid"] = config.n_grid;
  j["s"] = config.s;
  j["tau"] = config.tau;
  j["rho"] = config.rho;
  j["sigma"] = config.sigma;
  j["covariance"] = covariance_to_json(config.covariance);
  j["replications"] = config.replications;
  j["seed"] = config.seed;
  Json methods = Json::array();
  for (Screener m : config.methods) methods.push_back(screener_name(m));
  j["methods"] = methods;
  j["check_rdd"] = config.check_rdd;
  j["rdd_p_limit"] = config.rdd_p_limit;
  j["bound_constants"] = Json{{"K", config.bound_constants.K},
                              {"Cprime", config.bound_constants.Cprime},
                              {"C", config.bound_constants.C},
                              {"c0", config.bound_constants.c0},
                              {"delta", config.bound_constants.delta}};
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig config;
  try {
    config.p = j.at("p").get<int>();
    config.n_grid = j.at("n_grid").get<std::vector<int>>();
    config.s = j.at("s").get<int>();
    config.tau = j.at("tau").get<double>();
    config.rho = j.at("rho").get<double>();
    config.sigma = j.at("sigma").get<double>();
    config.covariance = covariance_from_json(j.at("covariance"));
    config.covariance.p = config.p;
    if (config.covariance.kind == CovarianceKind::Custom &&
        config.covariance.custom.rows() != config.p) {
      throw BadParams("custom covariance dimension does not match p");
    }
    config.replications = j.at("replications").get<int>();
    if (!j.contains("seed")) {
      throw BadParams("config requires an explicit seed");
    }
    config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("methods")) {
      config.methods.clear();
      for (const auto& name : j.at("methods")) {
        const std::string m = name.get<std::string>();
        if (m == "sis") {
          config.methods.push_back(Screener::Sis);
        } else if (m == "holp") {
          config.methods.push_back(Screener::Holp);
        } else {
          throw BadParams("unknown method '" + m + "'");
        }
      }
    }
    config.check_rdd = j.value("check_rdd", false);
    config.rdd_p_limit = j.value("rdd_p_limit", 500);
    if (j.contains("bound_constants")) {
      const Json& bc = j.at("bound_constants");
      config.bound_constants.K = bc.value("K", 1.0);
      config.bound_constants.Cprime = bc.value("Cprime", 1.0);
      config.bound_constants.C = bc.value("C", 1.0);
      config.bound_constants.c0 = bc.value("c0", 2.0);
      config.bound_constants.delta = bc.value("delta", 0.1);
    }
  } catch (const Json::exception& err) {
    throw BadParams(std::string("config parse error: ") + err.what());
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParams("cannot open config '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& err) {
    throw BadParams(std::string("config is not valid JSON: ") + err.what());
  }
  return config_from_json(j);
}

void write_json(const Json& j, const std::string& path) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

void write_trials_jsonl(const ExperimentConfig& config,
                        const std::vector<TrialResult>& trials, const std::string& path) {
  auto out = open_output(path);
  out << Json{{"config", config_to_json(config)}}.dump() << '\n';
  for (const auto& trial : trials) out << trial_to_json(trial).dump() << '\n';
}

void write_summary_csv(const SweepSummary& summary, const std::string& path) {
  auto out = open_output(path);
  out << "# config: " << config_to_json(summary.config).dump() << '\n';
  out << "# kappa: " << format_double(summary.kappa)
      << " max_correlation: " << format_double(summary.max_correlation) << '\n';
  const bool with_rdd = !summary.cells.empty() && summary.cells.front().rdd_checked;
  out << "n,method,successes,trials,rate,se,bound_sis,bound_holp";
  if (with_rdd) out << ",rdd_margin_mean,rdd_margin_median";
  out << '\n';
  for (const auto& cell : summary.cells) {
    out << cell.n << ',' << screener_name(cell.method) << ',' << cell.successes << ','
        << cell.trials << ',' << format_double(cell.rate) << ',' << format_double(cell.se)
        << ',' << bound_to_string(summary.bound_sis) << ','
        << bound_to_string(summary.bound_holp);
    if (with_rdd) {
      out << ',' << format_double(cell.rdd_margin_mean) << ','
          << format_double(cell.rdd_margin_median);
    }
    out << '\n';
  }
}

void write_gnuplot(const SweepSummary& summary, const std::string& path) {
  auto out = open_output(path);
  out << "# success rate vs sample size per method\n";
  out << "set datafile separator \",\"\n";
  out << "set xlabel \"n\"\n";
  out << "set ylabel \"strong consistency rate\"\n";
  out << "set yrange [0:1.05]\n";
  out << "set key bottom right\n";
  for (Screener method : summary.config.methods) {
    out << "$" << screener_name(method) << " << EOD\n";
    for (const auto& cell : summary.cells) {
      if (cell.method == method) {
        out << cell.n << ',' << format_double(cell.rate) << '\n';
      }
    }
    out << "EOD\n";
  }
  out << "plot ";
  bool first = true;
  for (Screener method : summary.config.methods) {
    if (!first) out << ", ";
    out << "$" << screener_name(method) << " using 1:2 with linespoints title \""
        << screener_name(method) << "\"";
    first = false;
  }
  out << '\n';
}

}  // namespace linscreen
