#include <doctest.h>

#include <random>

#include "telodl/analysis.hpp"
#include "telodl/errors.hpp"
#include "telodl/tel_chain.hpp"

using namespace telodl;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_stochastic(int n, std::mt19937& gen) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  MatrixXd P(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) P(i, j) = u(gen);
    P.row(i) /= P.row(i).sum();
  }
  return P;
}

// Power iteration; fine for the dense, well-mixing matrices used here.
VectorXd power_stationary(const MatrixXd& P) {
  VectorXd pi = VectorXd::Constant(P.rows(), 1.0 / P.rows());
  for (int it = 0; it < 20000; ++it) pi = (pi.transpose() * P).transpose();
  return pi / pi.sum();
}

}  // namespace

TEST_CASE("one-state chain") {
  const MatrixXd P = MatrixXd::Identity(1, 1);
  const MatrixXd F = fundamental_matrix(P);
  CHECK(F(0, 0) == doctest::Approx(1.0));
  CHECK(stationary(F, VectorXd::Ones(1))(0) == doctest::Approx(1.0));
}

TEST_CASE("symmetric two-state chain") {
  MatrixXd P(2, 2);
  P << 0.9, 0.1, 0.1, 0.9;
  const VectorXd b = VectorXd::Ones(2);
  const MatrixXd F = fundamental_matrix(P, b);
  const VectorXd pi = stationary(F, b);
  CHECK(pi(0) == doctest::Approx(0.5));
  CHECK(pi(1) == doctest::Approx(0.5));
  CHECK(efht(F, pi, 0, 1) == doctest::Approx(10.0));
  CHECK(efht(F, pi, 1, 1) == 0.0);
  CHECK(oracle_hitting_time(P, 0, 1) == doctest::Approx(10.0));
}

TEST_CASE("asymmetric two-state chain") {
  MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.25, 0.75;
  const VectorXd pi = stationary(fundamental_matrix(P), VectorXd::Ones(2));
  CHECK(pi(0) == doctest::Approx(1.0 / 3.0));
  CHECK(pi(1) == doctest::Approx(2.0 / 3.0));
  const VectorXd g = stationary_gth(P);
  CHECK(g(0) == doctest::Approx(1.0 / 3.0));
  // Leaving state 0 takes a geometric number of steps with rate 1/2.
  CHECK(oracle_hitting_time(P, 0, 1) == doctest::Approx(2.0));
}

TEST_CASE("random chains: balance, b invariance and both routes") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const MatrixXd P = random_stochastic(n, gen);
    const VectorXd ones = VectorXd::Ones(n);
    const VectorXd pi = stationary(fundamental_matrix(P, ones), ones);
    CHECK((pi.transpose() * P - pi.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((pi - power_stationary(P)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((pi - stationary_gth(P)).cwiseAbs().maxCoeff() <= 1e-12);

    // Any b with b^T 1 != 0 gives the same law.
    VectorXd b = VectorXd::Zero(n);
    b(0) = n;
    const MatrixXd Fb = fundamental_matrix(P, b);
    CHECK((stationary(Fb, b) - pi).cwiseAbs().maxCoeff() <= 1e-9);

    const MatrixXd F = fundamental_matrix(P, ones);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double a = efht(F, pi, i, j);
        const double o = oracle_hitting_time(P, i, j);
        CHECK(a == doctest::Approx(o).epsilon(1e-8));
        CHECK(a >= 0.0);
      }
  }
}

TEST_CASE("ergodicity check") {
  const auto id = verify_ergodic(MatrixXd::Identity(3, 3));
  CHECK_FALSE(id.ergodic);
  CHECK(id.components == 3);

  MatrixXd flip(2, 2);
  flip << 0, 1, 1, 0;
  const auto f = verify_ergodic(flip);
  CHECK_FALSE(f.ergodic);
  CHECK(f.period == 2);

  MatrixXd lazy(2, 2);
  lazy << 0.5, 0.5, 1, 0;
  CHECK(verify_ergodic(lazy).ergodic);

  MatrixXd leak(3, 3);
  leak << 0.5, 0.5, 0, 0.5, 0.5, 0, 0.2, 0.3, 0.5;
  const auto l = verify_ergodic(leak);
  CHECK_FALSE(l.ergodic);
  CHECK(l.unreachable == std::vector<int>{2});
}

TEST_CASE("analyze rejects a non-ergodic matrix") {
  CHECK_THROWS_AS(analyze(MatrixXd::Identity(2, 2), 0, 1), NumericalError);
}

TEST_CASE("efht needs mass at the target") {
  MatrixXd F = MatrixXd::Identity(2, 2);
  VectorXd pi(2);
  pi << 1.0, 0.0;
  CHECK_THROWS_AS(efht(F, pi, 0, 1), NumericalError);
}

TEST_CASE("analysis of a built chain") {
  const auto chain = build_tel_chain(3, 3, ControllerParams::defaults(3, 0.01));
  const auto from = chain.rrc(collision_repartition(3, 3));
  const auto to = chain.rrc(orthogonal_repartition(3, 3));
  const auto r = analyze(chain.P, from, to);
  CHECK(r.pi.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.pi.minCoeff() > 0.0);
  CHECK(r.alpha == r.pi(static_cast<Eigen::Index>(to)));
  CHECK(r.alpha > 0.9);
  CHECK(r.efht == doctest::Approx(oracle_hitting_time(chain.P, from, to)).epsilon(1e-8));
  CHECK(r.balance_residual <= 1e-9);
  CHECK(r.route_gap <= 1e-9);
}

TEST_CASE("stationary law stays positive when masses are tiny") {
  // K=8 at small epsilon puts masses far below round-off on some states.
  const auto chain = build_tel_chain(8, 8, ControllerParams::defaults(8, 1e-3));
  const VectorXd pi = stationary_gth(chain.P);
  CHECK(pi.minCoeff() > 0.0);
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((pi.transpose() * chain.P - pi.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}
