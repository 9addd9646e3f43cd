#include <doctest.h>

#include <cmath>
#include <random>

#include "onestep/errors.hpp"
#include "onestep/matrix_sqrt.hpp"

using namespace onestep;
using Eigen::MatrixXd;

TEST_CASE("simple roots") {
  CHECK(matrix_sqrt_psd(MatrixXd::Identity(2, 2)).isApprox(MatrixXd::Identity(2, 2), 1e-15));

  MatrixXd d = MatrixXd::Zero(2, 2);
  d.diagonal() << 4, 9;
  MatrixXd r = matrix_sqrt_psd(d);
  CHECK(r(0, 0) == doctest::Approx(2).epsilon(1e-15));
  CHECK(r(1, 1) == doctest::Approx(3).epsilon(1e-15));
  CHECK(std::abs(r(0, 1)) < 1e-15);

  CHECK(matrix_sqrt_psd(MatrixXd::Zero(3, 3)).isZero(0));
}

TEST_CASE("2x2 against the closed form") {
  // For a 2x2 PSD matrix M, sqrt(M) = (M + s I) / sqrt(tr M + 2 s) with s = sqrt(det M).
  MatrixXd m(2, 2);
  m << 2, -1, -1, 2;
  const double s = std::sqrt(3.0);
  MatrixXd expect = (m + s * MatrixXd::Identity(2, 2)) / std::sqrt(4.0 + 2 * s);
  MatrixXd b = matrix_sqrt_psd(m);
  CHECK((b - expect).norm() < 1e-14);
  CHECK((b * b.transpose() - m).norm() < 1e-12);
}

TEST_CASE("clamping and failure") {
  MatrixXd near(2, 2);
  near << 1, 1, 1, 1 - 1e-12;  // smallest eigenvalue about -5e-13
  MatrixXd b = matrix_sqrt_psd(near);
  CHECK((b * b - near).norm() < 1e-6);

  MatrixXd bad(2, 2);
  bad << 1, 0, 0, -0.5;
  CHECK_THROWS_AS(matrix_sqrt_psd(bad), NotPsdError);

  MatrixXd one(1, 1);
  one << -1e-300;
  CHECK_THROWS_AS(matrix_sqrt_psd(one), NotPsdError);

  MatrixXd skew(2, 2);
  skew << 1, 0.5, 0.2, 1;
  CHECK_THROWS(matrix_sqrt_psd(skew));
}

TEST_CASE("property: random PSD matrices") {
  std::mt19937_64 gen(1234);
  std::uniform_int_distribution<int> dim(1, 5), rank_d(0, 5);
  std::uniform_real_distribution<double> u(-1, 1), scale_exp(-3, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = dim(gen);
    int k = std::min(n, rank_d(gen));  // rank deficient matrices included
    MatrixXd g(n, std::max(k, 1));
    for (int i = 0; i < g.size(); ++i) g.data()[i] = u(gen);
    if (k == 0) g.setZero();
    MatrixXd B = std::pow(10.0, scale_exp(gen)) * g * g.transpose();
    MatrixXd b = matrix_sqrt_psd(B);
    CHECK((b * b.transpose() - B).norm() <= 1e-10 * std::max(1.0, B.norm()));
    CHECK((b - b.transpose()).norm() == 0.0);
  }
}
