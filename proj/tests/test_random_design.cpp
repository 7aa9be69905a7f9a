#include <doctest.h>

#include "linscreen/random_design.hpp"

#include <cmath>

using namespace linscreen;

TEST_CASE("covariance materialization") {
  SUBCASE("identity") {
    const CovarianceModel model = materialize(CovarianceSpec::identity(3));
    CHECK((model.sigma - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((model.chol - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(model.kappa == 1.0);
  }
  SUBCASE("equicorrelated closed form") {
    const CovarianceModel model = materialize(CovarianceSpec::equicorrelated(2, 0.5));
    CHECK(model.sigma(0, 1) == 0.5);
    CHECK(model.lambda_min == doctest::Approx(0.5));
    CHECK(model.lambda_max == doctest::Approx(1.5));
    CHECK(model.kappa == doctest::Approx(3.0));
  }
  SUBCASE("boundary violations fail the factorization") {
    CHECK_THROWS_AS(materialize(CovarianceSpec::equicorrelated(2, -1.0)), NotPositiveDefinite);
    CHECK_THROWS_AS(materialize(CovarianceSpec::equicorrelated(3, 1.0)), NotPositiveDefinite);
    CHECK_THROWS_AS(materialize(CovarianceSpec::ar1(4, 1.0)), NotPositiveDefinite);
  }
  SUBCASE("cholesky factor reproduces sigma") {
    for (const CovarianceSpec& spec :
         {CovarianceSpec::equicorrelated(6, 0.4), CovarianceSpec::ar1(6, -0.6)}) {
      const CovarianceModel model = materialize(spec);
      CHECK((model.chol * model.chol.transpose() - model.sigma).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("ar1 spectrum matches a dense eigensolve") {
    const CovarianceModel fast = materialize(CovarianceSpec::ar1(20, 0.5));
    const CovarianceModel dense = materialize(CovarianceSpec::custom_matrix(fast.sigma));
    CHECK(fast.lambda_min == doctest::Approx(dense.lambda_min).epsilon(1e-8));
    CHECK(fast.lambda_max == doctest::Approx(dense.lambda_max).epsilon(1e-8));
  }
  SUBCASE("custom diagonals renormalize") {
    Matrix sigma = Matrix::Identity(2, 2) * 4.0;
    sigma(0, 1) = sigma(1, 0) = 1.0;
    const CovarianceModel model = materialize(CovarianceSpec::custom_matrix(sigma));
    CHECK(model.renormalized);
    CHECK(model.sigma(0, 0) == doctest::Approx(1.0));
    CHECK(model.sigma(0, 1) == doctest::Approx(0.25));
  }
  SUBCASE("extreme eigenvalues respect the condition number") {
    for (const CovarianceSpec& spec :
         {CovarianceSpec::identity(5), CovarianceSpec::equicorrelated(8, 0.3),
          CovarianceSpec::ar1(9, 0.7)}) {
      const CovarianceModel model = materialize(spec);
      CHECK(model.lambda_min >= 1.0 / model.kappa - 1e-12);
      CHECK(model.lambda_max <= model.kappa + 1e-12);
    }
  }
}

TEST_CASE("design sampling is deterministic and distributionally sane") {
  SUBCASE("same seed gives bit-identical draws") {
    const CovarianceModel model = materialize(CovarianceSpec::ar1(7, 0.5));
    const DesignMatrix a = sample_design(model, 11, SeedPath{99, {1, 2}});
    const DesignMatrix b = sample_design(model, 11, SeedPath{99, {1, 2}});
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() == 0.0);
    const DesignMatrix c = sample_design(model, 11, SeedPath{99, {1, 3}});
    CHECK(a.fingerprint() != c.fingerprint());
  }
  SUBCASE("column variances near one under the identity") {
    const CovarianceModel model = materialize(CovarianceSpec::identity(5));
    const DesignMatrix x = sample_design(model, 10000, SeedPath{7, {0}});
    for (int j = 0; j < 5; ++j) {
      const double var = x.values().col(j).squaredNorm() / x.n();
      CHECK(var > 0.9);
      CHECK(var < 1.1);
    }
  }
  SUBCASE("adjacent correlation under ar1") {
    const CovarianceModel model = materialize(CovarianceSpec::ar1(4, 0.5));
    const DesignMatrix x = sample_design(model, 10000, SeedPath{8, {0}});
    for (int j = 0; j + 1 < 4; ++j) {
      const double corr = x.values().col(j).dot(x.values().col(j + 1)) / x.n();
      CHECK(corr > 0.45);
      CHECK(corr < 0.55);
    }
  }
}

TEST_CASE("coefficient sampling stays inside the class") {
  SUBCASE("degenerate ratio pins magnitudes at tau") {
    const SparseCoefficients beta = sample_beta(10, 4, 2.5, 1.0, SeedPath{3, {0}});
    for (double v : beta.values()) CHECK(std::abs(v) == 2.5);
  }
  SUBCASE("membership sweep") {
    for (int draw = 0; draw < 100000; ++draw) {
      const SparseCoefficients beta =
          sample_beta(12, 3, 0.5, 2.0, SeedPath{4, {static_cast<std::uint64_t>(draw)}});
      if (!membership(beta, 3, 2.0, 0.5)) {
        CHECK(membership(beta, 3, 2.0, 0.5));
        break;
      }
    }
  }
  SUBCASE("empty support") {
    const SparseCoefficients beta = sample_beta(5, 0, 1.0, 2.0, SeedPath{5, {0}});
    CHECK(beta.s() == 0);
  }
  SUBCASE("support covers the range uniformly enough") {
    std::vector<int> counts(6, 0);
    for (int draw = 0; draw < 6000; ++draw) {
      const SparseCoefficients beta =
          sample_beta(6, 1, 1.0, 1.0, SeedPath{6, {static_cast<std::uint64_t>(draw)}});
      ++counts[beta.support()[0] - 1];
    }
    for (int c : counts) {
      CHECK(c > 800);
      CHECK(c < 1200);
    }
  }
}

TEST_CASE("noise sampling") {
  SUBCASE("zero sigma gives the zero vector") {
    const Vector eps = sample_noise(64, 0.0, SeedPath{1, {0}});
    CHECK(eps.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("empirical variance near sigma squared") {
    const Vector eps = sample_noise(100000, 2.0, SeedPath{2, {0}});
    const double var = eps.squaredNorm() / eps.size();
    CHECK(var > 3.8);
    CHECK(var < 4.2);
  }
  SUBCASE("same seed same vector") {
    const Vector a = sample_noise(17, 1.5, SeedPath{10, {4}});
    const Vector b = sample_noise(17, 1.5, SeedPath{10, {4}});
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("inverse normal cdf sanity") {
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
  CHECK(inverse_normal_cdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-9));
  CHECK_THROWS(inverse_normal_cdf(0.0));
  CHECK_THROWS(inverse_normal_cdf(1.0));
}

TEST_CASE("seed paths are order sensitive and fold deterministically") {
  const SeedPath a{42, {1, 2}};
  const SeedPath b{42, {2, 1}};
  const SeedPath c{42, {1, 2}};
  CHECK(a.fold() == c.fold());
  CHECK(a.fold() != b.fold());
  CHECK(SeedPath{42, {}}.fold() != SeedPath{43, {}}.fold());
  CHECK(a.child(0).fold() != a.child(1).fold());
}
