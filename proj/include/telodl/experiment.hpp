#pragma once

// Sweeps over (algorithm, K, N, epsilon) and their CSV output.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "telodl/chain.hpp"
#include "telodl/monte_carlo.hpp"

namespace telodl {

/// Constants left unset fall back to ControllerParams::defaults(K, epsilon).
struct ParamOverrides {
  std::optional<double> nu1, nu2, phi1, phi2, c;

  ControllerParams apply(int players, double epsilon) const;
};

/// Controller constants for one cell.  With `match_epsilon`, an ODL cell gets
/// epsilon^c equal to `epsilon`, so it experiments as often as TEL does.
ControllerParams cell_params(Algorithm algo, int players, double epsilon,
                             const ParamOverrides& overrides, bool match_epsilon);

ApproxChain build_chain(Algorithm algo, int players, int resources, const ControllerParams& params);

struct SweepPlan {
  std::vector<Algorithm> algos{Algorithm::Tel};
  std::vector<int> players{3};
  std::vector<int> extra_resources{0};  // N = K + delta for each delta
  std::vector<double> epsilons{0.01};
  bool approx = true;
  bool monte_carlo = false;
  bool match_epsilon = false;
  ParamOverrides overrides;
  std::uint64_t seed = 1;
  int efht_trials = 5000;
  std::int64_t alpha_iterations = 1'000'000;
  std::int64_t burn_in = 1000;
  std::int64_t max_steps = 100'000'000;
  int workers = 0;

  void validate() const;
};

inline constexpr const char* kSweepHeader = "algo,K,N,epsilon,method,metric,value,std_error,seed,trials";
inline constexpr const char* kAnalyzeHeader = "algo,K,N,epsilon,method,efht,alpha,seed";

struct SweepRow {
  Algorithm algo;
  int players;
  int resources;
  double epsilon;
  std::string method;  // approx | mc
  std::string metric;  // efht | alpha | censored | error
  std::optional<double> value;
  std::optional<double> std_error;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::string message;  // non-empty on error rows

  std::string csv() const;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // plan order
  int failed_cells = 0;
};

/// Cells run concurrently; rows come back in the order algo, K, delta,
/// epsilon, method.  A failing cell yields an error row and the sweep goes on.
SweepResult run_sweep(const SweepPlan& plan);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Locale-independent, round-trippable number text.
std::string format_number(double x);

struct AnalyzeRow {
  Algorithm algo;
  int players;
  int resources;
  double epsilon;
  double efht;
  double alpha;

  std::string csv() const;
};

/// EFHT from the full-collision class to the orthogonal class and the
/// stationary mass of the latter.
AnalyzeRow analyze_chain(const ApproxChain& chain, const std::string& from, const std::string& to);

/// Index of a named state: "full-collision", "orthogonal", or a label such as
/// "Z_2(1)" / "xi3_2(1)".
std::size_t resolve_state(const ApproxChain& chain, const std::string& name);

struct ComplexityRow {
  int players;
  int resources;
  boost::multiprecision::cpp_int full_tel;
  boost::multiprecision::cpp_int full_odl;
  std::uint64_t reduced;
  std::uint64_t approx_tel;
  std::uint64_t approx_odl;
};

inline constexpr const char* kComplexityHeader = "K,N,full_tel,full_odl,reduced,approx_tel,approx_odl";

ComplexityRow complexity(int players, int resources);
std::string to_csv(const ComplexityRow& row);

}  // namespace telodl
