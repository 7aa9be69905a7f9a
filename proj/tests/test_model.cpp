#include <doctest.h>

#include "linscreen/matrix_io.hpp"
#include "linscreen/model.hpp"
#include "linscreen/rng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

using namespace linscreen;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(rows.begin()->size());
  Matrix m(n, p);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("standardize rejects a constant column") {
  DesignMatrix x(from_rows({{1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}}));
  CHECK_THROWS_AS(standardize(x), ConstantColumn);
  try {
    standardize(x);
  } catch (const ConstantColumn& err) {
    CHECK(err.column == 1);
  }
}

TEST_CASE("standardize fixed point and hand example") {
  DesignMatrix fixed(from_rows({{-1.0}, {1.0}}));
  const DesignMatrix out = standardize(fixed);
  CHECK(out.values()(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(out.values()(1, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // column (0, 2): mean 1, sd 1 under the 1/n divisor
  DesignMatrix shifted(from_rows({{0.0}, {2.0}}));
  const DesignMatrix z = standardize(shifted);
  CHECK(z.values()(0, 0) == doctest::Approx(-1.0));
  CHECK(z.values()(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("standardize produces mean zero unit variance columns") {
  RngStream rng(SeedPath{11, {0}});
  Matrix raw(40, 6);
  for (int i = 0; i < raw.rows(); ++i) {
    for (int j = 0; j < raw.cols(); ++j) raw(i, j) = 3.0 * rng.next_normal() + j;
  }
  const DesignMatrix out = standardize(DesignMatrix(raw));
  for (int j = 0; j < out.p(); ++j) {
    const double mean = out.values().col(j).sum() / out.n();
    double var = 0.0;
    for (int i = 0; i < out.n(); ++i) {
      var += (out.values()(i, j) - mean) * (out.values()(i, j) - mean);
    }
    var /= out.n();
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(var - 1.0) < 1e-10);
  }

  // Idempotence.
  const DesignMatrix twice = standardize(out);
  CHECK((twice.values() - out.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("assemble matches hand arithmetic") {
  SUBCASE("identity design") {
    DesignMatrix x(Matrix::Identity(2, 2));
    SparseCoefficients beta(2, {1}, {3.0});
    const RegressionInstance inst = assemble(x, beta, Vector::Zero(2));
    CHECK(inst.response[0] == 3.0);
    CHECK(inst.response[1] == 0.0);
  }
  SUBCASE("second column with noise") {
    DesignMatrix x(from_rows({{1.0, 2.0}, {3.0, 4.0}}));
    SparseCoefficients beta(2, {2}, {1.0});
    Vector eps(2);
    eps << 0.5, -0.5;
    const RegressionInstance inst = assemble(x, beta, eps);
    CHECK(inst.response[0] == doctest::Approx(2.5));
    CHECK(inst.response[1] == doctest::Approx(3.5));
  }
  SUBCASE("empty support returns the noise") {
    DesignMatrix x(from_rows({{1.0, 2.0}, {3.0, 4.0}}));
    SparseCoefficients beta(2, {}, {});
    Vector eps(2);
    eps << 0.25, -4.0;
    const RegressionInstance inst = assemble(x, beta, eps);
    CHECK(inst.response[0] == 0.25);
    CHECK(inst.response[1] == -4.0);
  }
}

TEST_CASE("assemble recomputation is bit exact") {
  RngStream rng(SeedPath{17, {0}});
  Matrix raw(13, 9);
  for (int i = 0; i < raw.rows(); ++i) {
    for (int j = 0; j < raw.cols(); ++j) raw(i, j) = rng.next_normal();
  }
  DesignMatrix x(raw);
  SparseCoefficients beta(9, {2, 5, 8}, {1.25, -0.75, 2.5});
  Vector eps(13);
  for (int i = 0; i < 13; ++i) eps[i] = rng.next_normal();

  const RegressionInstance a = assemble(x, beta, eps);
  const RegressionInstance b = assemble(x, beta, eps);
  for (int i = 0; i < 13; ++i) CHECK(a.response[i] == b.response[i]);
}

TEST_CASE("assemble validates dimensions") {
  DesignMatrix x(Matrix::Identity(3, 2));
  SparseCoefficients beta(2, {1}, {1.0});
  CHECK_THROWS_AS(assemble(x, beta, Vector::Zero(2)), DimensionMismatch);
  SparseCoefficients wrong_p(3, {1}, {1.0});
  CHECK_THROWS_AS(assemble(x, wrong_p, Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("membership examples") {
  SparseCoefficients beta(2, {1, 2}, {1.0, -2.0});
  CHECK(membership(beta, 2, 2.0, 1.0));
  CHECK_FALSE(membership(beta, 2, 1.5, 1.0));  // ratio 2 > 1.5
  SparseCoefficients empty(4, {}, {});
  CHECK(membership(empty, 0, 1.0, 5.0));
}

TEST_CASE("membership is monotone in its bounds") {
  RngStream rng(SeedPath{23, {0}});
  for (int trial = 0; trial < 300; ++trial) {
    const int p = 6;
    const int s = 1 + static_cast<int>(rng.next_index(4));
    std::vector<int> support;
    std::vector<double> values;
    for (int j = 1; j <= p && static_cast<int>(support.size()) < s; ++j) {
      support.push_back(j);
      values.push_back((rng.next_uniform() + 0.5) * (rng.next_u64() & 1 ? 1.0 : -1.0));
    }
    SparseCoefficients beta(p, support, values);
    const int s_bound = 1 + static_cast<int>(rng.next_index(5));
    const double rho_bound = 1.0 + 3.0 * rng.next_uniform();
    const double tau_bound = rng.next_uniform();
    if (membership(beta, s_bound, rho_bound, tau_bound)) {
      CHECK(membership(beta, s_bound + 1, rho_bound, tau_bound));
      CHECK(membership(beta, s_bound, rho_bound + 1.0, tau_bound));
      CHECK(membership(beta, s_bound, rho_bound, tau_bound * 0.5));
    }
  }
}

TEST_CASE("sparse coefficient validation") {
  CHECK_THROWS_AS(SparseCoefficients(3, {1, 1}, {1.0, 2.0}), BadParams);   // duplicate index
  CHECK_THROWS_AS(SparseCoefficients(3, {2, 1}, {1.0, 2.0}), BadParams);   // not sorted
  CHECK_THROWS_AS(SparseCoefficients(3, {1}, {0.0}), BadParams);           // zero value
  CHECK_THROWS_AS(SparseCoefficients(3, {4}, {1.0}), BadParams);           // out of range
  CHECK_THROWS_AS(SparseCoefficients(3, {1, 2}, {1.0}), DimensionMismatch);
}

TEST_CASE("csv matrix round trip preserves doubles exactly") {
  RngStream rng(SeedPath{31, {0}});
  Matrix m(7, 5);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) {
      m(i, j) = rng.next_normal() * std::pow(10.0, static_cast<int>(rng.next_index(9)) - 4);
    }
  }
  m(0, 0) = 0.1;         // not exactly representable
  m(1, 1) = -1.0 / 3.0;  // repeating binary fraction
  const std::string path =
      (std::filesystem::temp_directory_path() / "linscreen_io_test.csv").string();
  write_matrix_csv(m, path);
  const Matrix back = read_matrix_csv(path);
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 5; ++j) CHECK(back(i, j) == m(i, j));
  }
  std::remove(path.c_str());
}

TEST_CASE("coefficient csv round trip") {
  SparseCoefficients beta(10, {2, 7, 9}, {0.125, -3.75, 1e-7});
  const std::string path =
      (std::filesystem::temp_directory_path() / "linscreen_beta_test.csv").string();
  write_coefficients_csv(beta, path);
  const SparseCoefficients back = read_coefficients_csv(path, 10);
  CHECK(back.support() == beta.support());
  for (std::size_t i = 0; i < back.values().size(); ++i) {
    CHECK(back.values()[i] == beta.values()[i]);
  }
  std::remove(path.c_str());
}
