#include "linscreen/conditions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace linscreen {

namespace {

constexpr double kSymmetryTol = 1e-8;
constexpr double kLuPivotTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix effective_symmetric(const ScreeningMatrix& phi) {
  const Matrix& m = phi.values;
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol) {
    throw AsymmetricInput("screening matrix asymmetry " + std::to_string(asym) +
                          " exceeds tolerance 1e-8");
  }
  Matrix out = 0.5 * (m + m.transpose());
  out.diagonal().array() -= phi.diag_shift;
  return out;
}

void check_sparsity_range(int s, int p) {
  if (s < 1 || s > p - 1) {
    throw BadSparsity("sparsity must satisfy 1 <= s <= p-1 (got s=" + std::to_string(s) +
                      ", p=" + std::to_string(p) + ")");
  }
}

// Sum of the m largest entries of vals (all nonnegative). scratch is reused
// between calls to avoid reallocation in the pair loop.
double top_sum(const std::vector<double>& vals, int m, std::vector<double>& scratch) {
  if (m <= 0 || vals.empty()) return 0.0;
  const int take = std::min<int>(m, static_cast<int>(vals.size()));
  scratch = vals;
  std::nth_element(scratch.begin(), scratch.begin() + (take - 1), scratch.end(),
                   std::greater<double>());
  double sum = 0.0;
  for (int t = 0; t < take; ++t) sum += scratch[t];
  return sum;
}

// Indices (into vals) of the m largest entries, value-descending with index
// ascending as the tie break.
std::vector<int> top_indices(const std::vector<double>& vals, int m) {
  const int take = std::min<int>(std::max(m, 0), static_cast<int>(vals.size()));
  std::vector<int> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (vals[a] != vals[b]) return vals[a] > vals[b];
    return a < b;
  });
  order.resize(take);
  return order;
}

double pair_c0_max(double diag, double abs_ik, double worst_sum) {
  if (!(diag > abs_ik)) return -kInf;
  if (worst_sum <= 0.0) return kInf;
  return (diag - abs_ik) / worst_sum;
}

struct CombinationWalker {
  // Iterates all size-m subsets of {0,...,p-1} in lexicographic order.
  int p;
  int m;
  std::vector<int> current;
  bool done = false;

  CombinationWalker(int p_, int m_) : p(p_), m(m_) {
    if (m > p) {
      done = true;
      return;
    }
    current.resize(m);
    std::iota(current.begin(), current.end(), 0);
  }

  void advance() {
    int pos = m - 1;
    while (pos >= 0 && current[pos] == p - m + pos) --pos;
    if (pos < 0) {
      done = true;
      return;
    }
    ++current[pos];
    for (int t = pos + 1; t < m; ++t) current[t] = current[t - 1] + 1;
  }
};

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int t = 0; t < k; ++t) out = out * (n - t) / (t + 1);
  return out;
}

}  // namespace

RddReport rdd_check(const ScreeningMatrix& phi, int s, double c0) {
  const int p = phi.p();
  check_sparsity_range(s, p);
  if (!(c0 >= 1.0)) throw BadC0("restricted diagonal dominance requires c0 >= 1");
  const Matrix m = effective_symmetric(phi);

  RddReport report;
  report.sparsity = s;
  report.c0_required = c0;
  report.margin = kInf;
  report.c0_max = kInf;

  const int subset_size = s - 1;
  std::vector<double> plus(p > 2 ? p - 2 : 0);
  std::vector<double> minus(p > 2 ? p - 2 : 0);
  std::vector<double> scratch;
  int worst_i = -1;
  int worst_k = -1;

  for (int i = 0; i < p; ++i) {
    for (int k = 0; k < p; ++k) {
      if (k == i) continue;
      int len = 0;
      for (int j = 0; j < p; ++j) {
        if (j == i || j == k) continue;
        plus[len] = std::abs(m(i, j) + m(k, j));
        minus[len] = std::abs(m(i, j) - m(k, j));
        ++len;
      }
      const double worst = std::max(top_sum(plus, subset_size, scratch),
                                    top_sum(minus, subset_size, scratch));
      const double abs_ik = std::abs(m(i, k));
      const double margin = m(i, i) - c0 * worst - abs_ik;
      if (margin < report.margin) {
        report.margin = margin;
        worst_i = i;
        worst_k = k;
      }
      report.c0_max = std::min(report.c0_max, pair_c0_max(m(i, i), abs_ik, worst));
    }
  }

  report.holds = report.margin > 0.0;

  if (worst_i >= 0) {
    // Reconstruct the adversarial index set for the binding pair.
    std::vector<double> pl, mi;
    std::vector<int> cols;
    for (int j = 0; j < p; ++j) {
      if (j == worst_i || j == worst_k) continue;
      pl.push_back(std::abs(m(worst_i, j) + m(worst_k, j)));
      mi.push_back(std::abs(m(worst_i, j) - m(worst_k, j)));
      cols.push_back(j);
    }
    const double plus_sum = top_sum(pl, subset_size, scratch);
    const double minus_sum = top_sum(mi, subset_size, scratch);
    const auto& side = plus_sum >= minus_sum ? pl : mi;
    RddWitness w;
    w.i = worst_i + 1;
    w.k = worst_k + 1;
    for (int pos : top_indices(side, subset_size)) w.index_set.push_back(cols[pos] + 1);
    std::sort(w.index_set.begin(), w.index_set.end());
    report.witness = std::move(w);
  }
  return report;
}

double rdd_max_c0(const ScreeningMatrix& phi, int s) {
  // c0 = 1 is always admissible as a probe value; only c0_max is consumed.
  return rdd_check(phi, s, 1.0).c0_max;
}

RddReport rdd_brute_force(const ScreeningMatrix& phi, int s, double c0) {
  const int p = phi.p();
  check_sparsity_range(s, p);
  if (!(c0 >= 1.0)) throw BadC0("restricted diagonal dominance requires c0 >= 1");

  double evals = 0.0;
  for (int size = 0; size <= s - 1; ++size) {
    evals += binomial(p, size) * (p - size) * (p - size - 1);
  }
  if (evals > 1e8) {
    throw TooLarge("brute-force enumeration would need " + std::to_string(evals) +
                   " constraint evaluations");
  }

  const Matrix m = effective_symmetric(phi);

  RddReport report;
  report.sparsity = s;
  report.c0_required = c0;
  report.margin = kInf;
  report.c0_max = kInf;

  std::vector<char> in_set(p, 0);
  for (int size = 0; size <= s - 1; ++size) {
    for (CombinationWalker walk(p, size); !walk.done; walk.advance()) {
      std::fill(in_set.begin(), in_set.end(), 0);
      for (int j : walk.current) in_set[j] = 1;
      for (int i = 0; i < p; ++i) {
        if (in_set[i]) continue;
        for (int k = 0; k < p; ++k) {
          if (k == i || in_set[k]) continue;
          double plus_sum = 0.0;
          double minus_sum = 0.0;
          for (int j : walk.current) {
            plus_sum += std::abs(m(i, j) + m(k, j));
            minus_sum += std::abs(m(i, j) - m(k, j));
          }
          const double worst = std::max(plus_sum, minus_sum);
          const double abs_ik = std::abs(m(i, k));
          const double margin = m(i, i) - c0 * worst - abs_ik;
          if (margin < report.margin) {
            report.margin = margin;
            RddWitness w;
            w.i = i + 1;
            w.k = k + 1;
            for (int j : walk.current) w.index_set.push_back(j + 1);
            report.witness = std::move(w);
          }
          report.c0_max = std::min(report.c0_max, pair_c0_max(m(i, i), abs_ik, worst));
        }
      }
    }
  }
  report.holds = report.margin > 0.0;
  return report;
}

bool dominance_necessary_check(const ScreeningMatrix& phi, int s, double c0) {
  const int p = phi.p();
  check_sparsity_range(s, p);
  if (!(c0 >= 1.0)) throw BadC0("dominance check requires c0 >= 1");
  const Matrix m = effective_symmetric(phi);

  std::vector<double> row(p - 1);
  std::vector<double> scratch;
  for (int i = 0; i < p; ++i) {
    int len = 0;
    for (int j = 0; j < p; ++j) {
      if (j != i) row[len++] = std::abs(m(i, j));
    }
    if (m(i, i) < c0 * top_sum(row, s - 1, scratch)) return false;
  }
  return true;
}

ConsistencyVerdict consistency_check(const Vector& estimate, const SparseCoefficients& beta) {
  if (estimate.size() != beta.p()) {
    throw DimensionMismatch("estimate length does not match coefficient dimension");
  }
  const int p = beta.p();
  std::vector<char> on_support(p, 0);
  for (int j : beta.support()) on_support[j - 1] = 1;

  ConsistencyVerdict v;
  double min_on = kInf;
  double max_off = -kInf;
  bool signs_ok = true;
  for (std::size_t idx = 0; idx < beta.support().size(); ++idx) {
    const double est = estimate[beta.support()[idx] - 1];
    min_on = std::min(min_on, std::abs(est));
    const double truth = beta.values()[idx];
    const bool match = (est > 0.0 && truth > 0.0) || (est < 0.0 && truth < 0.0);
    if (!match) signs_ok = false;
  }
  for (int j = 0; j < p; ++j) {
    if (!on_support[j]) max_off = std::max(max_off, std::abs(estimate[j]));
  }

  const bool has_off = beta.s() < p;
  v.ordering_ok = !has_off || min_on > max_off;
  v.signs_ok = signs_ok;
  v.strong = v.ordering_ok && v.signs_ok;
  v.separation = has_off ? min_on - max_off : kInf;
  return v;
}

namespace {

struct IcWorkspace {
  Matrix css;
  Matrix cos;  // C_{S^c, S}
  Eigen::PartialPivLU<Matrix> lu;
};

IcWorkspace ic_prepare(const Matrix& gram, const std::vector<int>& support) {
  if (gram.rows() != gram.cols()) throw DimensionMismatch("gram matrix must be square");
  const int p = static_cast<int>(gram.rows());
  if (support.empty()) throw BadParams("support must be nonempty");
  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    if (sorted[t] < 1 || sorted[t] > p) throw BadParams("support index out of range");
    if (t > 0 && sorted[t] == sorted[t - 1]) throw BadParams("duplicate support index");
  }
  const int s = static_cast<int>(sorted.size());

  IcWorkspace w;
  w.css.resize(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) w.css(a, b) = gram(sorted[a] - 1, sorted[b] - 1);
  }
  std::vector<int> rest;
  rest.reserve(p - s);
  std::vector<char> in_s(p, 0);
  for (int j : sorted) in_s[j - 1] = 1;
  for (int j = 0; j < p; ++j) {
    if (!in_s[j]) rest.push_back(j);
  }
  w.cos.resize(static_cast<int>(rest.size()), s);
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (int b = 0; b < s; ++b) w.cos(static_cast<int>(a), b) = gram(rest[a], sorted[b] - 1);
  }

  w.lu.compute(w.css);
  const double scale = w.css.cwiseAbs().maxCoeff();
  const double min_pivot = w.lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot > kLuPivotTol * scale)) {
    throw SingularSubmatrix("C_{S,S} pivot underflow; support submatrix is singular");
  }
  return w;
}

}  // namespace

IcReport ic_check(const Matrix& gram, const std::vector<int>& support,
                  const std::vector<int>& signs) {
  if (signs.size() != support.size()) {
    throw BadSigns("sign vector length must match support size");
  }
  for (int sgn : signs) {
    if (sgn != 1 && sgn != -1) throw BadSigns("signs must be +1 or -1");
  }
  IcWorkspace w = ic_prepare(gram, support);
  const int s = static_cast<int>(support.size());

  std::vector<int> sorted = support;
  std::sort(sorted.begin(), sorted.end());
  // Reorder signs to match the sorted support.
  Vector sign_vec(s);
  for (int a = 0; a < s; ++a) {
    const auto it = std::find(sorted.begin(), sorted.end(), support[a]);
    sign_vec[static_cast<int>(it - sorted.begin())] = static_cast<double>(signs[a]);
  }

  const Vector weights = w.lu.solve(sign_vec);
  double value = 0.0;
  for (int r = 0; r < w.cos.rows(); ++r) {
    double acc = 0.0;
    for (int c = 0; c < s; ++c) acc += w.cos(r, c) * weights[c];
    value = std::max(value, std::abs(acc));
  }

  IcReport report;
  report.value = value;
  report.theta_max = 1.0 - value;
  report.sign_mode = SignMode::Fixed;
  report.support = sorted;
  report.signs.resize(s);
  for (int a = 0; a < s; ++a) report.signs[a] = static_cast<int>(sign_vec[a]);
  return report;
}

IcReport ic_worst_case(const Matrix& gram, const std::vector<int>& support) {
  IcWorkspace w = ic_prepare(gram, support);
  const int s = static_cast<int>(support.size());

  // M = C_{S^c,S} C_{S,S}^{-1}; the worst sign vector for each row aligns with
  // the row's signs, so the maximum over 2^s sign vectors is the largest
  // absolute row sum.
  const Matrix m_t = w.lu.solve(w.cos.transpose());  // s x (p-s)
  double value = 0.0;
  for (int r = 0; r < m_t.cols(); ++r) {
    double acc = 0.0;
    for (int c = 0; c < s; ++c) acc += std::abs(m_t(c, r));
    value = std::max(value, acc);
  }

  IcReport report;
  report.value = value;
  report.theta_max = 1.0 - value;
  report.sign_mode = SignMode::WorstCase;
  report.support = support;
  std::sort(report.support.begin(), report.support.end());
  return report;
}

double sparse_riesz(const DesignMatrix& design, int s) {
  const int p = design.p();
  if (s < 1 || s > p) throw BadSparsity("sparse Riesz needs 1 <= s <= p");
  if (binomial(p, s) > 1e6) {
    throw TooLarge("subset enumeration C(p,s) exceeds 1e6");
  }
  const Matrix gram =
      design.values().transpose() * design.values() / static_cast<double>(design.n());

  double mu = kInf;
  Matrix sub(s, s);
  for (CombinationWalker walk(p, s); !walk.done; walk.advance()) {
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) sub(a, b) = gram(walk.current[a], walk.current[b]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sub, Eigen::EigenvaluesOnly);
    mu = std::min(mu, eig.eigenvalues().minCoeff());
  }
  return mu;
}

SufficiencyResult rdd_sufficient(const ScreeningMatrix& phi, int s, const SufficiencyMode& mode) {
  const int p = phi.p();
  check_sparsity_range(s, p);
  const Matrix m = effective_symmetric(phi);
  for (int i = 0; i < p; ++i) {
    if (std::abs(m(i, i) - 1.0) > 1e-8) {
      throw BadDiagonal("sufficiency conditions need a unit diagonal");
    }
  }

  SufficiencyResult out;
  if (std::holds_alternative<OffdiagBound>(mode)) {
    const double c = std::get<OffdiagBound>(mode).c;
    if (!(c >= 0.0 && c < 1.0)) throw BadParams("off-diagonal bound needs 0 <= c < 1");
    double max_off = 0.0;
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        if (i != j) max_off = std::max(max_off, std::abs(m(i, j)));
      }
    }
    out.applies = max_off < c / (2.0 * s);
    out.c0_guaranteed = c > 0.0 ? 1.0 / c : kInf;
  } else {
    const double r = std::get<ArDecay>(mode).r;
    if (!(r > 0.0 && r < 1.0)) throw BadParams("AR decay needs 0 < r < 1");
    bool ok = true;
    for (int i = 0; i < p && ok; ++i) {
      for (int j = 0; j < p && ok; ++j) {
        if (i != j && !(std::abs(m(i, j)) < std::pow(r, std::abs(i - j)))) ok = false;
      }
    }
    out.applies = ok;
    out.c0_guaranteed = (1.0 - r) * (1.0 - r) / (4.0 * r);
  }
  return out;
}

SparseCoefficients adversarial_beta(const ScreeningMatrix& phi, int i, int k,
                                    const std::vector<int>& index_set, double rho,
                                    AdversarialVariant variant) {
  const int p = phi.p();
  if (i < 1 || i > p || k < 1 || k > p) throw BadParams("witness indices out of range");
  if (i == k) throw IndexOverlap("witness indices i and k must differ");
  for (int j : index_set) {
    if (j < 1 || j > p) throw BadParams("index set entry out of range");
    if (j == i || j == k) throw IndexOverlap("index set must avoid i and k");
  }
  if (!(rho >= 1.0)) throw BadParams("rho must be >= 1");

  const Matrix m = effective_symmetric(phi);
  std::vector<int> support = index_set;
  support.push_back(i);
  std::sort(support.begin(), support.end());

  std::vector<double> values(support.size());
  for (std::size_t t = 0; t < support.size(); ++t) {
    const int j = support[t];
    if (j == i) {
      values[t] = 1.0;
      continue;
    }
    const double d = variant == AdversarialVariant::MinusPattern
                         ? m(i - 1, j - 1) - m(k - 1, j - 1)
                         : m(i - 1, j - 1) + m(k - 1, j - 1);
    const double sgn = d < 0.0 ? -1.0 : 1.0;  // sign(0) -> +1
    values[t] = -rho * sgn;
  }
  return SparseCoefficients(p, std::move(support), std::move(values));
}

ConverseWitness converse_witness(const ScreeningMatrix& phi, int s, double rho) {
  const int p = phi.p();
  check_sparsity_range(s, p);
  if (!(rho >= 1.0)) throw BadParams("rho must be >= 1");
  const Matrix m = effective_symmetric(phi);

  const int subset_size = s - 1;
  ConverseWitness best;
  best.margin = kInf;

  std::vector<double> plus, minus;
  std::vector<int> cols;
  std::vector<double> scratch;
  for (int i = 0; i < p; ++i) {
    for (int k = 0; k < p; ++k) {
      if (k == i) continue;
      plus.clear();
      minus.clear();
      cols.clear();
      for (int j = 0; j < p; ++j) {
        if (j == i || j == k) continue;
        plus.push_back(std::abs(m(i, j) + m(k, j)));
        minus.push_back(std::abs(m(i, j) - m(k, j)));
        cols.push_back(j);
      }
      const double margin_minus =
          m(i, i) - rho * top_sum(minus, subset_size, scratch) - m(i, k);
      const double margin_plus =
          m(i, i) - rho * top_sum(plus, subset_size, scratch) + m(i, k);
      if (margin_minus < best.margin) {
        best.margin = margin_minus;
        best.i = i + 1;
        best.k = k + 1;
        best.variant = AdversarialVariant::MinusPattern;
        best.index_set.clear();
        for (int pos : top_indices(minus, subset_size)) best.index_set.push_back(cols[pos] + 1);
      }
      if (margin_plus < best.margin) {
        best.margin = margin_plus;
        best.i = i + 1;
        best.k = k + 1;
        best.variant = AdversarialVariant::PlusPattern;
        best.index_set.clear();
        for (int pos : top_indices(plus, subset_size)) best.index_set.push_back(cols[pos] + 1);
      }
    }
  }
  std::sort(best.index_set.begin(), best.index_set.end());
  return best;
}

double sis_sample_bound(double K, double rho, int s, double sigma, double tau, double r,
                        int p, double delta) {
  if (!(K > 0.0)) throw BadParams("K must be positive");
  if (!(rho >= 1.0) || s < 1) throw BadParams("need rho >= 1 and s >= 1");
  if (!(sigma >= 0.0)) throw BadParams("sigma must be nonnegative");
  if (!(tau > 0.0)) throw NonpositiveTau("tau must be positive");
  if (!(r >= 0.0)) throw BadParams("r must be nonnegative");
  if (p < 1) throw BadParams("p must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw BadParams("delta must lie in (0,1]");
  if (r >= 1.0 / (2.0 * rho * s)) {
    throw HypothesisViolated("sis bound requires max correlation r < 1/(2*rho*s)");
  }
  const double ratio = (1.0 + 2.0 * rho * s + 2.0 * sigma / tau) / (1.0 - 2.0 * rho * s * r);
  return 144.0 * K * ratio * ratio * std::log(3.0 * p / delta);
}

double holp_sample_bound(double Cprime, double kappa, double rho, int s, double sigma,
                         double tau, int p, double delta, double c0, double C) {
  if (!(Cprime >= 0.0) || !(C >= 0.0)) throw BadParams("constants must be nonnegative");
  if (!(kappa >= 1.0)) throw BadParams("condition number must be >= 1");
  if (!(rho >= 1.0) || s < 1) throw BadParams("need rho >= 1 and s >= 1");
  if (!(sigma >= 0.0)) throw BadParams("sigma must be nonnegative");
  if (!(tau > 0.0)) throw NonpositiveTau("tau must be positive");
  if (p < 1) throw BadParams("p must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw BadParams("delta must lie in (0,1]");
  if (!(c0 > 1.0)) throw BadC0("dimension growth ratio c0 must exceed 1");
  const double term = rho * s + sigma / tau;
  const double first =
      2.0 * Cprime * kappa * kappa * kappa * kappa * term * term * std::log(3.0 * p / delta);
  const double second = 8.0 * C / ((c0 - 1.0) * (c0 - 1.0));
  return std::max(first, second);
}

}  // namespace linscreen
