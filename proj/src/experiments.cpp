#include "linscreen/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace linscreen {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

void ExperimentConfig::validate() const {
  if (p < 2) throw BadParams("config: p must be at least 2");
  if (n_grid.empty()) throw BadParams("config: n_grid must be nonempty");
  for (std::size_t t = 0; t < n_grid.size(); ++t) {
    if (n_grid[t] < 1) throw BadParams("config: sample sizes must be positive");
    if (t > 0 && n_grid[t] <= n_grid[t - 1]) {
      throw BadParams("config: n_grid must be strictly increasing");
    }
  }
  if (s < 1 || s > p) throw BadParams("config: need 1 <= s <= p");
  if (!(tau > 0.0)) throw BadParams("config: tau must be positive");
  if (!(rho >= 1.0)) throw BadParams("config: rho must be >= 1");
  if (!(sigma >= 0.0)) throw BadParams("config: sigma must be nonnegative");
  if (covariance.p != p) throw BadParams("config: covariance dimension must equal p");
  if (replications < 1) throw BadParams("config: replications must be >= 1");
  if (methods.empty()) throw BadParams("config: at least one method required");
  const bool has_holp =
      std::find(methods.begin(), methods.end(), Screener::Holp) != methods.end();
  if (has_holp) {
    for (int n : n_grid) {
      if (n > p) {
        throw BadParams("config: HOLP requires n <= p (projection regime)");
      }
    }
  }
  if (check_rdd) {
    if (s > p - 1) throw BadParams("config: the dominance check needs s <= p-1");
    if (rdd_p_limit < 1) throw BadParams("config: rdd_p_limit must be positive");
  }
  if (!(bound_constants.K > 0.0)) throw BadParams("config: bound constant K must be positive");
  if (!(bound_constants.Cprime >= 0.0) || !(bound_constants.C >= 0.0)) {
    throw BadParams("config: bound constants must be nonnegative");
  }
  if (!(bound_constants.c0 > 1.0)) throw BadParams("config: bound constant c0 must exceed 1");
  if (!(bound_constants.delta > 0.0 && bound_constants.delta <= 1.0)) {
    throw BadParams("config: delta must lie in (0,1]");
  }
}

TrialResult run_trial(const ExperimentConfig& config, const CovarianceModel& model,
                      int n_index, int trial) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = config.n_grid.at(static_cast<std::size_t>(n_index));

  TrialResult result;
  result.trial = trial;
  result.n = n;
  result.seed_path = {static_cast<std::uint64_t>(n_index), static_cast<std::uint64_t>(trial)};

  const SeedPath base{config.seed, result.seed_path};
  const DesignMatrix x = sample_design(model, n, base.child(0));
  const SparseCoefficients beta = sample_beta(config.p, config.s, config.tau, config.rho,
                                              base.child(1));
  const Vector eps = sample_noise(n, config.sigma, base.child(2));
  const RegressionInstance instance = assemble(x, beta, eps);

  const bool rdd_enabled = config.check_rdd && config.p <= config.rdd_p_limit;
  for (Screener method : config.methods) {
    try {
      Vector beta_hat;
      if (rdd_enabled) {
        const AncillaryMatrix a =
            method == Screener::Sis ? build_sis(x) : build_holp(x);
        beta_hat = estimate(a, instance.response);
        const ScreeningMatrix phi = screening_matrix(a, x);
        const double shift = noise_shift(a, eps, config.tau);
        result.rdd[method] =
            rdd_check(ScreeningMatrix(phi.values, shift), config.s, config.rho);
      } else {
        beta_hat = method == Screener::Sis ? sis_estimate(x, instance.response)
                                           : holp_estimate(x, instance.response);
      }
      const ConsistencyVerdict verdict = consistency_check(beta_hat, beta);
      result.methods[method] =
          MethodOutcome{verdict.strong, verdict.ordering_ok, verdict.signs_ok,
                        verdict.separation};
    } catch (const NumericalError& err) {
      // Measure-zero for Gaussian designs; recorded, counted as failure.
      result.methods[method] = MethodOutcome{false, false, false, 0.0};
      result.errors[method] = err.what();
    }
  }

  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double median(std::vector<double> values) {
  if (values.empty()) return kNan;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
  return 0.5 * (values[mid - 1] + upper);
}

SweepSummary sweep(const ExperimentConfig& config, int threads) {
  config.validate();
  const CovarianceModel model = materialize(config.covariance);

  SweepSummary summary;
  summary.config = config;
  summary.kappa = model.kappa;
  summary.max_correlation = 0.0;
  for (int i = 0; i < config.p; ++i) {
    for (int j = i + 1; j < config.p; ++j) {
      summary.max_correlation = std::max(summary.max_correlation, std::abs(model.sigma(i, j)));
    }
  }

  const BoundConstants& bc = config.bound_constants;
  try {
    summary.bound_sis = sis_sample_bound(bc.K, config.rho, config.s, config.sigma, config.tau,
                                         summary.max_correlation, config.p, bc.delta);
  } catch (const HypothesisViolated&) {
    summary.bound_sis = kInf;  // correlation hypothesis fails: no finite guarantee
  }
  summary.bound_holp = holp_sample_bound(bc.Cprime, model.kappa, config.rho, config.s,
                                         config.sigma, config.tau, config.p, bc.delta, bc.c0,
                                         bc.C);

  const std::size_t n_cells = config.n_grid.size() * static_cast<std::size_t>(config.replications);
  summary.trials.resize(n_cells);

  int worker_count = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  worker_count = std::max(1, std::min<int>(worker_count, static_cast<int>(n_cells)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= n_cells) return;
      const int n_index = static_cast<int>(cell / config.replications);
      const int trial = static_cast<int>(cell % config.replications);
      try {
        summary.trials[cell] = run_trial(config, model, n_index, trial);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Deterministic fold in (n, method) order.
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    for (Screener method : config.methods) {
      SweepCell cell;
      cell.n = config.n_grid[ni];
      cell.method = method;
      cell.trials = config.replications;
      std::vector<double> margins;
      for (int t = 0; t < config.replications; ++t) {
        const TrialResult& tr = summary.trials[ni * config.replications + t];
        if (tr.methods.at(method).strong) ++cell.successes;
        const auto it = tr.rdd.find(method);
        if (it != tr.rdd.end()) margins.push_back(it->second.margin);
      }
      cell.rate = static_cast<double>(cell.successes) / cell.trials;
      cell.se = std::sqrt(cell.rate * (1.0 - cell.rate) / cell.trials);
      if (!margins.empty()) {
        cell.rdd_checked = true;
        double sum = 0.0;
        for (double v : margins) sum += v;
        cell.rdd_margin_mean = sum / static_cast<double>(margins.size());
        cell.rdd_margin_median = median(margins);
      }
      summary.cells.push_back(std::move(cell));
    }
  }
  return summary;
}

std::vector<ConcentrationRow> concentration_probe(const CovarianceSpec& spec,
                                                  const std::vector<int>& n_list,
                                                  int replications, double sigma,
                                                  const SeedPath& seed) {
  if (replications < 1) throw BadParams("probe: replications must be >= 1");
  const CovarianceModel model = materialize(spec);
  const int p = spec.p;

  std::vector<ConcentrationRow> rows;
  rows.reserve(n_list.size() * static_cast<std::size_t>(replications));
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const int n = n_list[ni];
    for (int rep = 0; rep < replications; ++rep) {
      const SeedPath base{seed.master, seed.path};
      const SeedPath cell = base.child(ni).child(static_cast<std::uint64_t>(rep));
      const DesignMatrix x = sample_design(model, n, cell.child(0));
      const Vector eps = sample_noise(n, sigma, cell.child(1));

      ConcentrationRow row;
      row.n = n;
      row.rep = rep;

      const Matrix phi_sis =
          x.values().transpose() * x.values() / static_cast<double>(n);
      row.sis_max_dev = (phi_sis - model.sigma).cwiseAbs().maxCoeff();
      row.sis_max_eta =
          (x.values().transpose() * eps / static_cast<double>(n)).cwiseAbs().maxCoeff();

      if (n <= p) {
        const AncillaryMatrix a = build_holp(x);
        const Matrix phi = a.values * x.values();
        std::vector<double> diag(p);
        for (int i = 0; i < p; ++i) diag[i] = phi(i, i);
        std::vector<double> off;
        off.reserve(static_cast<std::size_t>(p) * (p - 1));
        for (int i = 0; i < p; ++i) {
          for (int j = 0; j < p; ++j) {
            if (i != j) off.push_back(std::abs(phi(i, j)));
          }
        }
        row.holp_med_diag = median(std::move(diag));
        row.holp_med_offdiag = median(std::move(off));
        row.holp_max_eta = (a.values * eps).cwiseAbs().maxCoeff();
      } else {
        row.holp_med_diag = kNan;
        row.holp_med_offdiag = kNan;
        row.holp_max_eta = kNan;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ScreeningMatrix random_symmetric_phi(RngStream& rng, int p) {
  Matrix m(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      const double v = 2.0 * rng.next_uniform() - 1.0;
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  m.diagonal().array() += 1.0;
  return ScreeningMatrix(std::move(m));
}

namespace {

Matrix random_pattern(RngStream& rng, int p) {
  Matrix r = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const double v = 2.0 * rng.next_uniform() - 1.0;
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

}  // namespace

ScreeningMatrix construct_rdd_passing(RngStream& rng, int p, int s, double c0) {
  const Matrix pattern = random_pattern(rng, p);
  double t = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    ScreeningMatrix phi(Matrix::Identity(p, p) + t * pattern);
    if (rdd_check(phi, s, c0).holds) {
      // One extra shrink keeps the margin at least 0.1 away from zero:
      // the margin is linear in t with intercept 1.
      return ScreeningMatrix(Matrix::Identity(p, p) + 0.9 * t * pattern);
    }
    t *= 0.5;
  }
  throw NumericalError("could not scale a pattern into the feasible region");
}

FailingConstruction construct_rdd_failing(RngStream& rng, int p, int s, double rho) {
  const Matrix pattern = random_pattern(rng, p);
  double t = 0.05;
  for (int iter = 0; iter < 400; ++iter) {
    ScreeningMatrix phi(Matrix::Identity(p, p) + t * pattern);
    const ConverseWitness witness = converse_witness(phi, s, rho);
    if (witness.margin <= 0.0) {
      return FailingConstruction{std::move(phi), witness};
    }
    t *= 1.25;
  }
  throw NumericalError("could not scale a pattern into a sign-aligned violation");
}

bool PropertyReport::all_passed() const {
  for (const auto& check : checks) {
    if (check.failures > 0) return false;
  }
  return true;
}

}  // namespace linscreen
