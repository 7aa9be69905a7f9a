#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linscreen/conditions.hpp"
#include "linscreen/random_design.hpp"
#include "linscreen/screeners.hpp"

namespace linscreen {

/// Constants entering the sample-size bound formulas. They are echoed into
/// sweep summaries verbatim; the defaults are placeholders, not claims about
/// their true values (K can be estimated empirically from chi-square draws).
struct BoundConstants {
  double K = 1.0;
  double Cprime = 1.0;
  double C = 1.0;
  double c0 = 2.0;  // dimension growth ratio p > c0 n; must exceed 1
  double delta = 0.1;
};

struct ExperimentConfig {
  int p = 0;
  std::vector<int> n_grid;  // strictly increasing
  int s = 0;
  double tau = 1.0;
  double rho = 1.0;
  double sigma = 0.0;
  CovarianceSpec covariance;
  int replications = 1;
  std::uint64_t seed = 0;
  std::vector<Screener> methods{Screener::Sis, Screener::Holp};
  // The shifted-matrix dominance check is O(p^3), so it is opt-in and gated.
  bool check_rdd = false;
  int rdd_p_limit = 500;
  BoundConstants bound_constants;

  void validate() const;
};

struct MethodOutcome {
  bool strong = false;
  bool ordering_ok = false;
  bool signs_ok = false;
  double separation = 0.0;
};

struct TrialResult {
  int trial = 0;
  int n = 0;
  std::map<Screener, MethodOutcome> methods;
  std::map<Screener, RddReport> rdd;        // shifted-matrix check when enabled
  std::map<Screener, std::string> errors;   // failed-with-reason (e.g. singular Gram)
  std::vector<std::uint64_t> seed_path;     // [n_index, trial]
  double elapsed_ms = 0.0;                  // diagnostics only, never serialized
};

/// One Monte Carlo cell: draws (X, beta, eps) from disjoint substreams of
/// config.seed, forms the response and evaluates every configured method.
/// A numerical failure inside a method marks that method failed-with-reason
/// instead of aborting the sweep.
TrialResult run_trial(const ExperimentConfig& config, const CovarianceModel& model,
                      int n_index, int trial);

struct SweepCell {
  int n = 0;
  Screener method = Screener::Sis;
  int successes = 0;
  int trials = 0;
  double rate = 0.0;
  double se = 0.0;  // binomial standard error sqrt(rate*(1-rate)/trials)
  bool rdd_checked = false;
  double rdd_margin_mean = 0.0;
  double rdd_margin_median = 0.0;
};

struct SweepSummary {
  ExperimentConfig config;
  double kappa = 1.0;
  double max_correlation = 0.0;  // max off-diagonal |Sigma_ij|
  double bound_sis = 0.0;        // +inf when the correlation hypothesis fails
  double bound_holp = 0.0;
  std::vector<SweepCell> cells;      // (n, method) in grid and config order
  std::vector<TrialResult> trials;   // (n, trial) order regardless of schedule
};

/// Runs every (n, trial) cell, possibly across threads; the aggregation is a
/// deterministic fold in (n, trial) order, so output is byte-identical for
/// any worker count.
SweepSummary sweep(const ExperimentConfig& config, int threads = 0);

/// Empirical concentration quantities per (n, replication): the SIS
/// screening-matrix deviation from Sigma, HOLP diagonal/off-diagonal medians
/// (NaN when n > p) and the noise image peaks for both methods.
struct ConcentrationRow {
  int n = 0;
  int rep = 0;
  double sis_max_dev = 0.0;
  double sis_max_eta = 0.0;
  double holp_med_diag = 0.0;
  double holp_med_offdiag = 0.0;
  double holp_max_eta = 0.0;
};

std::vector<ConcentrationRow> concentration_probe(const CovarianceSpec& spec,
                                                  const std::vector<int>& n_list,
                                                  int replications, double sigma,
                                                  const SeedPath& seed);

// ---- Constructed screening matrices for the property suite ----

/// Symmetric with off-diagonal entries uniform on [-1,1] and the diagonal
/// shifted by +1.
ScreeningMatrix random_symmetric_phi(RngStream& rng, int p);

/// Unit diagonal, random off-diagonal pattern scaled until the restricted
/// dominance margin at (s, c0) is comfortably positive.
ScreeningMatrix construct_rdd_passing(RngStream& rng, int p, int s, double c0);

/// Unit diagonal, off-diagonal pattern scaled up until some sign-aligned
/// constraint is violated, which certifies both an rdd_check failure and a
/// consistency break by the matching adversarial variant.
struct FailingConstruction {
  ScreeningMatrix phi;
  ConverseWitness witness;
};
FailingConstruction construct_rdd_failing(RngStream& rng, int p, int s, double rho);

// ---- Property suite (randomized checks of the consistency theory) ----

struct PropertyCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string detail;  // first counterexample or applicability note
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::vector<PropertyCheck> checks;
  bool all_passed() const;
};

PropertyReport run_property_suite(std::uint64_t seed);

double median(std::vector<double> values);

}  // namespace linscreen
