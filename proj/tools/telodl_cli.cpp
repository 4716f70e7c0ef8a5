// telodl: build and analyze the approximated chains, run Monte Carlo
// estimates and parameter sweeps.  Exit codes: 0 ok, 1 bad input, 2 numerical
// failure, 3 sweep finished with failed cells.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "telodl/analysis.hpp"
#include "telodl/errors.hpp"
#include "telodl/experiment.hpp"

using namespace telodl;

namespace {

// Flat JSON object whose keys are long option names: {"players": 3,
// "epsilon-grid": [0.1, 0.01]}.  Flags given on the command line win.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    throw CLI::ConversionError("writing JSON config is not supported");
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      input >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config key '" + key + "' must be a scalar or a list of scalars");
  }
};

struct Options {
  std::string algo = "tel";
  std::vector<int> players{3};
  std::vector<int> extra_resources;
  int resources = 0;  // 0: same as players
  double epsilon = 0.01;
  std::vector<double> epsilon_grid;
  bool match_epsilon = false;
  ParamOverrides overrides;
  std::uint64_t seed = 1;
  int trials = 5000;
  std::int64_t alpha_iters = 1'000'000;
  std::int64_t burn_in = 1000;
  std::int64_t max_steps = 100'000'000;
  int workers = 0;
  std::string method = "approx";
  std::string from = "full-collision";
  std::string to = "orthogonal";
  std::string chain_file;
  std::string out;
};

void add_config(CLI::App* sub) {
  sub->config_formatter(std::make_shared<JsonConfig>());
  sub->set_config("--config", "", "JSON file mirroring the flags");
}

void add_params(CLI::App* sub, Options& o) {
  sub->add_option("--c", o.overrides.c, "ODL experiment exponent (default K)");
  sub->add_option("--nu1", o.overrides.nu1, "TEL G(x) = -nu1 x + nu2");
  sub->add_option("--nu2", o.overrides.nu2);
  sub->add_option("--phi1", o.overrides.phi1, "TEL F(u) = -phi1 u + phi2 (default 1/(2K))");
  sub->add_option("--phi2", o.overrides.phi2);
}

void add_mc(CLI::App* sub, Options& o) {
  sub->add_option("--trials", o.trials, "hitting-time trials")->capture_default_str();
  sub->add_option("--alpha-iters", o.alpha_iters, "iterations of the stability run")->capture_default_str();
  sub->add_option("--burn-in", o.burn_in)->capture_default_str();
  sub->add_option("--max-steps", o.max_steps, "per-trial step cap")->capture_default_str();
  sub->add_option("--seed", o.seed)->capture_default_str();
  sub->add_option("--workers", o.workers, "threads (0: all cores); never changes the output");
}

void add_grid(CLI::App* sub, Options& o) {
  sub->add_option("--algo", o.algo, "tel, odl or both")
      ->check(CLI::IsMember({"tel", "odl", "both"}))
      ->capture_default_str();
  sub->add_option("--epsilon", o.epsilon)->capture_default_str();
  sub->add_option("--epsilon-grid", o.epsilon_grid, "several epsilon values");
  sub->add_flag("--match-epsilon", o.match_epsilon, "ODL epsilon^c equals the TEL epsilon");
  sub->add_option("--method", o.method, "approx, mc or both")
      ->check(CLI::IsMember({"approx", "mc", "both"}))
      ->capture_default_str();
  sub->add_option("--out", o.out, "output file (default stdout)");
  add_params(sub, o);
  add_mc(sub, o);
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + path);
  return file;
}

SweepPlan make_spec(const Options& o, bool single_size) {
  SweepPlan plan;
  if (o.algo == "both")
    plan.algos = {Algorithm::Tel, Algorithm::Odl};
  else
    plan.algos = {parse_algorithm(o.algo)};
  plan.players = o.players;
  if (single_size) {
    if (o.players.size() != 1) throw ValidationError("give a single --players value");
    const int K = o.players.front();
    const int N = o.resources > 0 ? o.resources : K;
    if (N < K) throw ValidationError("resources must be ≥ players");
    plan.extra_resources = {N - K};
  } else {
    plan.extra_resources = o.extra_resources.empty() ? std::vector<int>{0} : o.extra_resources;
  }
  plan.epsilons = o.epsilon_grid.empty() ? std::vector<double>{o.epsilon} : o.epsilon_grid;
  plan.approx = o.method != "mc";
  plan.monte_carlo = o.method != "approx";
  plan.match_epsilon = o.match_epsilon;
  plan.overrides = o.overrides;
  plan.seed = o.seed;
  plan.efht_trials = o.trials;
  plan.alpha_iterations = o.alpha_iters;
  plan.burn_in = o.burn_in;
  plan.max_steps = o.max_steps;
  plan.workers = o.workers;
  return plan;
}

int run_sweep_command(const Options& o, bool single_size) {
  const auto result = run_sweep(make_spec(o, single_size));
  std::ofstream file;
  write_csv(open_out(o.out, file), result.rows);
  for (const auto& r : result.rows)
    if (r.metric == "error")
      std::cerr << "cell " << to_string(r.algo) << " K=" << r.players << " N=" << r.resources
                << " eps=" << format_number(r.epsilon) << " (" << r.method << ") failed: " << r.message
                << '\n';
  return result.failed_cells > 0 ? 3 : 0;
}

int chain_build(const Options& o) {
  if (o.algo == "both") throw ValidationError("chain build takes a single algorithm");
  if (o.players.size() != 1) throw ValidationError("give a single --players value");
  const int K = o.players.front();
  const int N = o.resources > 0 ? o.resources : K;
  if (N < K) throw ValidationError("resources must be ≥ players");
  const auto algo = parse_algorithm(o.algo);
  const auto params = cell_params(algo, K, o.epsilon, o.overrides, o.match_epsilon);
  const auto chain = build_chain(algo, K, N, params);
  const auto report = verify_ergodic(chain.P);
  std::ofstream file;
  open_out(o.out, file) << to_json(chain).dump(1) << '\n';
  std::cerr << chain.size() << " states, " << (report.ergodic ? "ergodic" : report.diagnostic);
  if (!chain.dropped.empty()) std::cerr << " (" << chain.dropped.size() << " unreachable dropped)";
  std::cerr << '\n';
  return 0;
}

int chain_analyze(const Options& o) {
  std::ifstream in(o.chain_file, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + o.chain_file);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("chain file: ") + e.what());
  }
  const auto row = analyze_chain(chain_from_json(doc), o.from, o.to);
  std::ofstream file;
  auto& os = open_out(o.out, file);
  os << kAnalyzeHeader << '\n' << row.csv() << '\n';
  return 0;
}

int complexity_command(const Options& o) {
  std::ofstream file;
  auto& os = open_out(o.out, file);
  os << kComplexityHeader << '\n';
  const auto deltas = o.extra_resources.empty() ? std::vector<int>{0} : o.extra_resources;
  for (int K : o.players)
    for (int d : deltas) os << to_csv(complexity(K, K + d)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trial-and-error and optimal dynamical learning: approximated chains and simulation"};
  app.require_subcommand(1);
  Options o;

  auto* chain = app.add_subcommand("chain", "approximated Markov chains");
  chain->require_subcommand(1);

  auto* build = chain->add_subcommand("build", "write a chain as JSON");
  build->add_option("--algo", o.algo, "tel or odl")->check(CLI::IsMember({"tel", "odl"}))->capture_default_str();
  build->add_option("--players,-K", o.players)->expected(1);
  build->add_option("--resources,-N", o.resources, "default: players");
  build->add_option("--epsilon", o.epsilon)->capture_default_str();
  build->add_flag("--match-epsilon", o.match_epsilon, "ODL epsilon^c equals --epsilon");
  build->add_option("--out", o.out);
  add_params(build, o);
  add_config(build);

  auto* analyze_cmd = chain->add_subcommand("analyze", "EFHT and stability of a chain file");
  analyze_cmd->add_option("chain", o.chain_file, "chain JSON")->required();
  analyze_cmd->add_option("--from", o.from, "full-collision, orthogonal or a state label")->capture_default_str();
  analyze_cmd->add_option("--to", o.to)->capture_default_str();
  analyze_cmd->add_option("--out", o.out);
  add_config(analyze_cmd);

  auto* simulate = app.add_subcommand("simulate", "one (K, N) across an epsilon grid");
  simulate->add_option("--players,-K", o.players)->expected(1);
  simulate->add_option("--resources,-N", o.resources, "default: players");
  add_grid(simulate, o);
  add_config(simulate);

  auto* sweep = app.add_subcommand("sweep", "cross product of algorithms, K, N = K + delta and epsilon");
  sweep->add_option("--players,-K", o.players, "one or more K");
  sweep->add_option("--extra-resources", o.extra_resources, "one or more delta >= 0 (default 0)");
  add_grid(sweep, o);
  add_config(sweep);

  auto* complexity_cmd = app.add_subcommand("complexity", "state counts of the full and reduced chains");
  complexity_cmd->add_option("--players,-K", o.players, "one or more K");
  complexity_cmd->add_option("--extra-resources", o.extra_resources, "one or more delta >= 0");
  complexity_cmd->add_option("--out", o.out);
  add_config(complexity_cmd);

  simulate->callback([&] { o.method = simulate->count("--method") ? o.method : "mc"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build) return chain_build(o);
    if (*analyze_cmd) return chain_analyze(o);
    if (*simulate) return run_sweep_command(o, true);
    if (*sweep) return run_sweep_command(o, false);
    if (*complexity_cmd) return complexity_command(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
