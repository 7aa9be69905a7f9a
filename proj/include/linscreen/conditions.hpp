#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "linscreen/model.hpp"
#include "linscreen/screeners.hpp"

namespace linscreen {

// Restricted diagonal dominance with sparsity s: for every index set I with
// |I| <= s-1 and every ordered pair i != k outside I,
//
//   Phi_ii > C0 * max{ sum_{j in I} |Phi_ij + Phi_kj|,
//                      sum_{j in I} |Phi_ij - Phi_kj| } + |Phi_ik|,
//
// with strict inequality. The checker reduces the quantifier over I: all
// terms are nonnegative, so the adversarial I for each pair is the top-(s-1)
// entries of each absolute-sum array, turning the subset search into a
// selection problem (O(p^2 (p+s)) total). Index sets never intersect {i,k}.

struct RddWitness {
  int i = 0;                   // 1-based
  int k = 0;                   // 1-based
  std::vector<int> index_set;  // 1-based, the adversarial I
};

struct RddReport {
  bool holds = false;
  int sparsity = 0;
  double c0_required = 0.0;
  /// Supremum of admissible C0 at this sparsity: +inf when unbounded, -inf
  /// when no C0 works. The supremum itself is not admissible (strictness);
  /// the check holds exactly for c0 < c0_max.
  double c0_max = 0.0;
  std::optional<RddWitness> witness;  // tightest or violated constraint
  /// min over pairs of Phi_ii - c0 * worst_sum - |Phi_ik|; holds <=> margin > 0.
  double margin = 0.0;
};

/// Decide restricted diagonal dominance on the effective matrix
/// (values - diag_shift * I). Requires 1 <= s <= p-1 and c0 >= 1. Inputs
/// asymmetric beyond 1e-8 throw; smaller asymmetry is averaged away.
RddReport rdd_check(const ScreeningMatrix& phi, int s, double c0);

/// Supremum of admissible C0 (same conventions as RddReport::c0_max).
double rdd_max_c0(const ScreeningMatrix& phi, int s);

/// Literal enumeration over all index sets; test oracle for rdd_check.
/// Throws TooLarge beyond ~1e8 constraint evaluations.
RddReport rdd_brute_force(const ScreeningMatrix& phi, int s, double c0);

/// Weaker dominance condition implied by restricted diagonal dominance:
/// Phi_ii >= c0 * (top-(s-1) sum of |Phi_ij|, j != i) for every i.
bool dominance_necessary_check(const ScreeningMatrix& phi, int s, double c0);

struct ConsistencyVerdict {
  bool ordering_ok = false;  // min on-support |b^| strictly above max off-support
  bool signs_ok = false;     // sign agreement on the support
  bool strong = false;       // ordering_ok && signs_ok
  double separation = 0.0;   // min_on - max_off; +inf sentinel when no off-support
};

ConsistencyVerdict consistency_check(const Vector& estimate, const SparseCoefficients& beta);

enum class SignMode { Fixed, WorstCase };

struct IcReport {
  double value = 0.0;      // || C_{S^c,S} C_{S,S}^{-1} signs ||_inf
  double theta_max = 0.0;  // 1 - value; the condition holds at level theta iff value <= 1 - theta
  SignMode sign_mode = SignMode::Fixed;
  std::vector<int> support;  // 1-based
  std::vector<int> signs;    // empty in worst-case mode
};

/// Irrepresentable-condition value for a fixed sign vector on the support.
/// C_{S,S} must be invertible (LU pivot guard 1e-12 relative).
IcReport ic_check(const Matrix& gram, const std::vector<int>& support,
                  const std::vector<int>& signs);

/// Worst case over all 2^s sign vectors; closed form as the maximum
/// absolute row sum of C_{S^c,S} C_{S,S}^{-1}.
IcReport ic_worst_case(const Matrix& gram, const std::vector<int>& support);

/// Sparse Riesz constant: min over all size-s column subsets of
/// lambda_min(X_pi^T X_pi / n). Minima over smaller subsets are dominated, so
/// only subsets of size exactly s are enumerated. Guarded at C(p,s) <= 1e6.
double sparse_riesz(const DesignMatrix& design, int s);

/// Sufficient conditions that certify restricted diagonal dominance for a
/// unit-diagonal matrix without running the full check.
struct OffdiagBound {
  double c;  // max off-diagonal below c/(2s) certifies C0 >= 1/c
};
struct ArDecay {
  double r;  // |Phi_ij| < r^|i-j| certifies C0 >= (1-r)^2 / (4r)
};
using SufficiencyMode = std::variant<OffdiagBound, ArDecay>;

struct SufficiencyResult {
  bool applies = false;
  /// Certified constant, reported verbatim; for the AR case it can fall
  /// below the admissible floor of 1, so cross-checks should clamp.
  double c0_guaranteed = 0.0;
};

SufficiencyResult rdd_sufficient(const ScreeningMatrix& phi, int s, const SufficiencyMode& mode);

enum class AdversarialVariant { MinusPattern, PlusPattern };

/// Necessity construction: beta_i = 1 and beta_j = -rho * sign(Phi_ij -+ Phi_kj)
/// on the index set (minus/plus pattern), with sign(0) mapped to +1 so the
/// vector stays inside the sparsity class. Support is I united with {i}.
SparseCoefficients adversarial_beta(const ScreeningMatrix& phi, int i, int k,
                                    const std::vector<int>& index_set, double rho,
                                    AdversarialVariant variant);

/// Tightest sign-aligned constraint. When its margin is <= 0, the matching
/// adversarial_beta variant provably defeats strong screening consistency:
///   MinusPattern breaks when Phi_ii - rho*sum_minus - Phi_ik <= 0,
///   PlusPattern  breaks when Phi_ii - rho*sum_plus  + Phi_ik <= 0.
/// Either signed margin going nonpositive also certifies an rdd_check failure.
struct ConverseWitness {
  int i = 0;
  int k = 0;
  std::vector<int> index_set;
  AdversarialVariant variant = AdversarialVariant::MinusPattern;
  double margin = 0.0;
};

ConverseWitness converse_witness(const ScreeningMatrix& phi, int s, double rho);

/// Sample-size bound for SIS under a max-correlation constraint:
///   144 K ((1 + 2 rho s + 2 sigma/tau) / (1 - 2 rho s r))^2 log(3p/delta).
/// Requires r < 1/(2 rho s); throws HypothesisViolated otherwise.
double sis_sample_bound(double K, double rho, int s, double sigma, double tau, double r,
                        int p, double delta);

/// Sample-size bound for HOLP:
///   max{ 2 C' kappa^4 (rho s + sigma/tau)^2 log(3p/delta), 8 C / (c0-1)^2 }.
/// c0 is the dimension growth ratio p > c0 n and must exceed 1.
double holp_sample_bound(double Cprime, double kappa, double rho, int s, double sigma,
                         double tau, int p, double delta, double c0, double C);

}  // namespace linscreen
