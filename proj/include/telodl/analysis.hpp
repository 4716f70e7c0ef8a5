#pragma once

// Analytics for finite ergodic chains: generalized fundamental matrix,
// stationary law, expected first hitting times.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace telodl {

struct ErgodicityReport {
  bool ergodic = false;
  int components = 0;  // strongly connected components of the positive-entry digraph
  int period = 0;      // of the component containing state 0
  std::vector<int> unreachable;  // states not mutually reachable with state 0
  std::string diagnostic;
};

/// Single strongly connected component and aperiodic.  Never throws on a
/// square input.
ErgodicityReport verify_ergodic(const Eigen::MatrixXd& P);

/// F = (I - P + 1 b^T)^-1.  Throws NumericalError when the system is singular
/// or the solve residual exceeds 1e-9 * dimension.
Eigen::MatrixXd fundamental_matrix(const Eigen::MatrixXd& P, const Eigen::VectorXd& b);
Eigen::MatrixXd fundamental_matrix(const Eigen::MatrixXd& P);  // b = 1

/// pi = b^T F.  Drift of the sum beyond 1e-6 throws, as does an entry below
/// -1e-12: states whose true mass is far below round-off come out of the
/// inverse as tiny values of either sign, and those are clamped to 0.
Eigen::VectorXd stationary(const Eigen::MatrixXd& F, const Eigen::VectorXd& b);

/// Stationary law by Grassmann-Taksar-Heyman state reduction.  It never
/// subtracts, so masses many orders of magnitude below round-off stay
/// positive and accurate.
Eigen::VectorXd stationary_gth(const Eigen::MatrixXd& P);

/// E_i[T_j] = (F_jj - F_ij) / pi_j.
double efht(const Eigen::MatrixXd& F, const Eigen::VectorXd& pi, std::size_t i, std::size_t j);

/// First-step analysis by plain Gaussian elimination, kept free of the
/// fundamental-matrix route so the two can check each other.
double oracle_hitting_time(const Eigen::MatrixXd& P, std::size_t i, std::size_t j);

struct AnalysisResult {
  Eigen::VectorXd pi;  // from stationary_gth; agrees with b^T F to 1e-9
  double efht = 0.0;
  double alpha = 0.0;  // pi[target]
  double row_sum_residual = 0.0;
  double balance_residual = 0.0;  // |pi P - pi|_inf
  double solve_residual = 0.0;    // |(I - P + 1 b^T) F - I|_inf
  double route_gap = 0.0;         // |b^T F - pi|_inf
  std::vector<std::string> warnings;
};

AnalysisResult analyze(const Eigen::MatrixXd& P, std::size_t from, std::size_t to);

}  // namespace telodl
