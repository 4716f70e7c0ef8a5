#include "telodl/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>

#include "telodl/errors.hpp"

namespace telodl {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

using Graph = std::vector<std::vector<int>>;

Graph positive_digraph(const Eigen::MatrixXd& P, bool transpose) {
  const int n = static_cast<int>(P.rows());
  Graph g(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (P(r, c) > 0.0) (transpose ? g[c] : g[r]).push_back(transpose ? r : c);
  return g;
}

std::vector<int> bfs_levels(const Graph& g, int start) {
  std::vector<int> level(g.size(), -1);
  std::queue<int> q;
  level[start] = 0;
  q.push(start);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : g[v])
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        q.push(w);
      }
  }
  return level;
}

// Tarjan, iterative.
int count_components(const Graph& g) {
  const int n = static_cast<int>(g.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, components = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < g[v].size()) {
        const int w = g[v][next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        ++components;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
        } while (w != v);
      }
      const int done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
    }
  }
  return components;
}

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

ErgodicityReport verify_ergodic(const Eigen::MatrixXd& P) {
  ErgodicityReport report;
  const int n = static_cast<int>(P.rows());
  if (n == 0 || P.cols() != n) {
    report.diagnostic = "matrix is empty or not square";
    return report;
  }
  const Graph forward = positive_digraph(P, false);
  const Graph backward = positive_digraph(P, true);
  report.components = count_components(forward);

  const auto out = bfs_levels(forward, 0);
  const auto in = bfs_levels(backward, 0);
  for (int v = 0; v < n; ++v)
    if (out[v] < 0 || in[v] < 0) report.unreachable.push_back(v);

  // Period of the class of state 0: gcd over edges u->v inside the class of
  // level(u) + 1 - level(v).
  int period = 0;
  for (int u = 0; u < n; ++u) {
    if (out[u] < 0 || in[u] < 0) continue;
    for (int v : forward[u])
      if (out[v] >= 0 && in[v] >= 0) period = std::gcd(period, std::abs(out[u] + 1 - out[v]));
  }
  report.period = period;
  report.ergodic = report.components == 1 && period == 1;

  std::ostringstream msg;
  if (report.ergodic) {
    msg << "ergodic";
  } else {
    msg << report.components << " strongly connected component(s), period " << period;
    if (!report.unreachable.empty()) {
      msg << "; not communicating with state 0:";
      for (int v : report.unreachable) msg << ' ' << v;
    }
  }
  report.diagnostic = msg.str();
  return report;
}

Eigen::MatrixXd fundamental_matrix(const Eigen::MatrixXd& P, const Eigen::VectorXd& b) {
  const auto n = P.rows();
  if (P.cols() != n || b.size() != n) throw ValidationError("fundamental matrix: dimension mismatch");
  if (std::abs(b.sum()) < 1e-300) throw ValidationError("fundamental matrix: b^T 1 must be nonzero");
  const Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(n, n) - P + Eigen::VectorXd::Ones(n) * b.transpose();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() > 1e-14))
    throw NumericalError("fundamental matrix: system is singular (chain not ergodic?)");
  Eigen::MatrixXd F = lu.inverse();
  const double residual = inf_norm(A * F - Eigen::MatrixXd::Identity(n, n));
  if (!(residual <= 1e-9 * static_cast<double>(n)))
    throw NumericalError("fundamental matrix: solve residual " + sci(residual));
  return F;
}

Eigen::MatrixXd fundamental_matrix(const Eigen::MatrixXd& P) {
  return fundamental_matrix(P, Eigen::VectorXd::Ones(P.rows()));
}

Eigen::VectorXd stationary(const Eigen::MatrixXd& F, const Eigen::VectorXd& b) {
  Eigen::VectorXd pi = (b.transpose() * F).transpose();
  const double total = pi.sum();
  if (std::abs(total - 1.0) > 1e-6)
    throw NumericalError("stationary law sums to " + sci(total));
  pi /= total;
  for (Eigen::Index k = 0; k < pi.size(); ++k) {
    if (!(pi[k] >= -1e-12))
      throw NumericalError("stationary law has a negative entry at state " + std::to_string(k));
    pi[k] = std::max(pi[k], 0.0);
  }
  return pi;
}

Eigen::VectorXd stationary_gth(const Eigen::MatrixXd& P) {
  const Eigen::Index n = P.rows();
  if (P.cols() != n || n == 0) throw ValidationError("stationary: matrix must be square");
  Eigen::MatrixXd A = P;
  // Censor states n-1, ..., 1 one at a time.
  for (Eigen::Index k = n - 1; k > 0; --k) {
    const double out = A.row(k).head(k).sum();
    if (!(out > 0.0)) throw NumericalError("stationary: state " + std::to_string(k) + " is not recurrent");
    for (Eigen::Index i = 0; i < k; ++i) {
      const double w = A(i, k) / out;
      if (w == 0.0) continue;
      A.row(i).head(k) += w * A.row(k).head(k);
    }
  }
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
  pi[0] = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) {
    const double out = A.row(k).head(k).sum();
    pi[k] = pi.head(k).dot(A.col(k).head(k)) / out;
  }
  pi /= pi.sum();
  for (Eigen::Index k = 0; k < n; ++k)
    if (!(pi[k] > 0.0))
      throw NumericalError("stationary law has a non-positive entry at state " + std::to_string(k));
  return pi;
}

double efht(const Eigen::MatrixXd& F, const Eigen::VectorXd& pi, std::size_t i, std::size_t j) {
  const auto n = static_cast<std::size_t>(F.rows());
  if (i >= n || j >= n) throw ValidationError("efht: state index out of range");
  if (i == j) return 0.0;
  const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
  if (!(pi[jj] >= 1e-15)) throw NumericalError("efht: target has negligible stationary mass");
  return std::max(0.0, (F(jj, jj) - F(ii, jj)) / pi[jj]);
}

double oracle_hitting_time(const Eigen::MatrixXd& P, std::size_t i, std::size_t j) {
  const std::size_t n = static_cast<std::size_t>(P.rows());
  if (i >= n || j >= n) throw ValidationError("hitting time: state index out of range");
  if (i == j) return 0.0;

  // Unknowns t_k for k != j:  t_k - sum_{l != j} P_kl t_l = 1.
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n; ++k)
    if (k != j) idx.push_back(k);
  const std::size_t m = idx.size();
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c)
      a[r][c] = (r == c ? 1.0 : 0.0) - P(static_cast<Eigen::Index>(idx[r]), static_cast<Eigen::Index>(idx[c]));
    a[r][m] = 1.0;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-300) throw NumericalError("hitting time: singular system");
    std::swap(a[pivot], a[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> t(m, 0.0);
  for (std::size_t r = m; r-- > 0;) {
    double s = a[r][m];
    for (std::size_t c = r + 1; c < m; ++c) s -= a[r][c] * t[c];
    t[r] = s / a[r][r];
  }
  const std::size_t pos = i < j ? i : i - 1;
  return t[pos];
}

AnalysisResult analyze(const Eigen::MatrixXd& P, std::size_t from, std::size_t to) {
  if (const auto report = verify_ergodic(P); !report.ergodic)
    throw NumericalError("chain is not ergodic: " + report.diagnostic);
  const auto n = P.rows();
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  const Eigen::MatrixXd F = fundamental_matrix(P, b);

  AnalysisResult out;
  out.pi = stationary_gth(P);
  // Raw b^T F: near round-off its smallest entries may dip below zero, which
  // stationary() rightly rejects, but the gap below still bounds them.
  const Eigen::VectorXd via_f = (b.transpose() * F).transpose();
  out.route_gap = (via_f - out.pi).cwiseAbs().maxCoeff();
  if (!(out.route_gap <= 1e-9))
    throw NumericalError("b^T F and the state-reduction law differ by " + sci(out.route_gap));
  out.efht = efht(F, out.pi, from, to);
  out.alpha = out.pi[static_cast<Eigen::Index>(to)];
  out.row_sum_residual = (P.rowwise().sum().array() - 1.0).abs().maxCoeff();
  out.balance_residual = (out.pi.transpose() * P - out.pi.transpose()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - P + Eigen::VectorXd::Ones(n) * b.transpose();
  out.solve_residual = inf_norm(A * F - Eigen::MatrixXd::Identity(n, n));
  if (out.alpha < 1e-12)
    out.warnings.push_back("target stationary mass below 1e-12; hitting time is ill-conditioned");
  return out;
}

}  // namespace telodl
