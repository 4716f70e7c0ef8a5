#include "telodl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include "telodl/analysis.hpp"
#include "telodl/errors.hpp"
#include "telodl/odl_chain.hpp"
#include "telodl/tel_chain.hpp"

namespace telodl {

ControllerParams ParamOverrides::apply(int players, double epsilon) const {
  ControllerParams p = ControllerParams::defaults(players, epsilon);
  if (nu1) p.nu1 = *nu1;
  if (nu2) p.nu2 = *nu2;
  if (phi1) p.phi1 = *phi1;
  if (phi2) p.phi2 = *phi2;
  if (c) p.c = *c;
  return p;
}

ControllerParams cell_params(Algorithm algo, int players, double epsilon,
                             const ParamOverrides& overrides, bool match_epsilon) {
  ControllerParams p = overrides.apply(players, epsilon);
  if (algo == Algorithm::Odl && match_epsilon) p = match_odl_epsilon(p, epsilon);
  return p;
}

ApproxChain build_chain(Algorithm algo, int players, int resources, const ControllerParams& params) {
  return algo == Algorithm::Tel ? build_tel_chain(players, resources, params)
                                : build_odl_chain(players, resources, params);
}

void SweepPlan::validate() const {
  if (algos.empty()) throw ValidationError("no algorithm selected");
  if (players.empty()) throw ValidationError("player grid is empty");
  if (extra_resources.empty()) throw ValidationError("resource rule is empty");
  if (epsilons.empty()) throw ValidationError("epsilon grid is empty");
  if (!approx && !monte_carlo) throw ValidationError("no method selected");
  for (int k : players)
    if (k < 1) throw ValidationError("players must be >= 1");
  for (int d : extra_resources)
    if (d < 0) throw ValidationError("resources must be ≥ players");
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("epsilon must lie in (0,1)");
  if (efht_trials < 1 || alpha_iterations < 1) throw ValidationError("trial counts must be >= 1");
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

template <class T>
std::string opt_int(const std::optional<T>& v) {
  return v ? std::to_string(*v) : "NA";
}

struct Cell {
  Algorithm algo;
  int players;
  int resources;
  double epsilon;
};

std::vector<SweepRow> approx_rows(const Cell& cell, const SweepPlan& plan) {
  const auto params = cell_params(cell.algo, cell.players, cell.epsilon, plan.overrides, plan.match_epsilon);
  const auto chain = build_chain(cell.algo, cell.players, cell.resources, params);
  const auto from = chain.rrc(collision_repartition(cell.players, cell.resources));
  const auto to = chain.rrc(orthogonal_repartition(cell.players, cell.resources));
  const auto r = analyze(chain.P, from, to);
  SweepRow base{cell.algo, cell.players, cell.resources, cell.epsilon, "approx", "", {}, {}, {}, {}, {}};
  SweepRow e = base, a = base;
  e.metric = "efht";
  e.value = r.efht;
  a.metric = "alpha";
  a.value = r.alpha;
  return {e, a};
}

std::vector<SweepRow> mc_rows(const Cell& cell, const SweepPlan& plan, int workers) {
  MonteCarloConfig cfg;
  cfg.algo = cell.algo;
  cfg.players = cell.players;
  cfg.resources = cell.resources;
  cfg.params = cell_params(cell.algo, cell.players, cell.epsilon, plan.overrides, plan.match_epsilon);
  cfg.seed = plan.seed;
  cfg.efht_trials = plan.efht_trials;
  cfg.alpha_iterations = plan.alpha_iterations;
  cfg.burn_in = plan.burn_in;
  cfg.max_steps = plan.max_steps;
  cfg.workers = workers;

  SweepRow base{cell.algo, cell.players, cell.resources, cell.epsilon, "mc", "", {}, {}, plan.seed, {}, {}};
  std::vector<SweepRow> rows;
  const auto efht = estimate_efht(cfg);
  SweepRow e = base;
  e.metric = "efht";
  e.value = efht.mean;
  e.std_error = efht.std_error;
  e.trials = efht.trials_used;
  rows.push_back(e);
  if (efht.censored > 0) {
    SweepRow c = base;
    c.metric = "censored";
    c.value = efht.censored;
    c.trials = plan.efht_trials;
    rows.push_back(c);
  }
  const auto alpha = estimate_alpha(cfg);
  SweepRow a = base;
  a.metric = "alpha";
  a.value = alpha.alpha;
  a.std_error = alpha.std_error;
  a.trials = alpha.iterations;
  rows.push_back(a);
  return rows;
}

}  // namespace

std::string SweepRow::csv() const {
  std::string out = std::string(to_string(algo)) + ',' + std::to_string(players) + ',' +
                    std::to_string(resources) + ',' + format_number(epsilon) + ',' + method + ',' +
                    metric + ',' + opt(value) + ',' + opt(std_error) + ',' + opt_int(seed) + ',' +
                    opt_int(trials);
  return out;
}

SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();
  std::vector<Cell> cells;
  for (auto algo : plan.algos)
    for (int k : plan.players)
      for (int d : plan.extra_resources)
        for (double e : plan.epsilons) cells.push_back({algo, k, k + d, e});

  // One slot per (cell, method) keeps the output order fixed.
  struct Job {
    Cell cell;
    bool mc;
  };
  std::vector<Job> jobs;
  for (const auto& c : cells) {
    if (plan.approx) jobs.push_back({c, false});
    if (plan.monte_carlo) jobs.push_back({c, true});
  }
  std::vector<std::vector<SweepRow>> slots(jobs.size());
  std::vector<char> failed(jobs.size(), 0);

  const int hw = std::max(1, plan.workers > 0 ? plan.workers : static_cast<int>(std::thread::hardware_concurrency()));
  const int outer = std::clamp(hw, 1, static_cast<int>(jobs.size()));
  const int inner = std::max(1, hw / outer);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto& job = jobs[j];
      try {
        slots[j] = job.mc ? mc_rows(job.cell, plan, inner) : approx_rows(job.cell, plan);
      } catch (const std::exception& ex) {
        SweepRow r{job.cell.algo, job.cell.players, job.cell.resources, job.cell.epsilon,
                   job.mc ? "mc" : "approx", "error", {}, {}, {}, {}, ex.what()};
        if (job.mc) r.seed = plan.seed;
        slots[j] = {r};
        failed[j] = 1;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < outer; ++w) pool.emplace_back(run);
    run();
  }

  SweepResult result;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    result.failed_cells += failed[j];
    for (auto& r : slots[j]) result.rows.push_back(std::move(r));
  }
  return result;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) os << r.csv() << '\n';
}

std::string AnalyzeRow::csv() const {
  return std::string(to_string(algo)) + ',' + std::to_string(players) + ',' + std::to_string(resources) +
         ',' + format_number(epsilon) + ",approx," + format_number(efht) + ',' + format_number(alpha) +
         ",NA";
}

std::size_t resolve_state(const ApproxChain& chain, const std::string& name) {
  const int K = chain.meta.players, N = chain.meta.resources;
  if (name == "full-collision") return chain.rrc(collision_repartition(K, N));
  if (name == "orthogonal") return chain.rrc(orthogonal_repartition(K, N));
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const auto& label = chain.states[k].label;
    if (label == name || label.substr(0, label.find(' ')) == name) return k;
  }
  throw ValidationError("unknown state '" + name + "'");
}

AnalyzeRow analyze_chain(const ApproxChain& chain, const std::string& from, const std::string& to) {
  const auto i = resolve_state(chain, from);
  const auto j = resolve_state(chain, to);
  const auto r = analyze(chain.P, i, j);
  const auto& m = chain.meta;
  return {m.algo, m.players, m.resources, m.epsilon, r.efht, r.alpha};
}

ComplexityRow complexity(int players, int resources) {
  if (players < 1) throw ValidationError("players must be >= 1");
  if (resources < players) throw ValidationError("resources must be ≥ players");
  ComplexityRow row{players, resources, full_chain_size(4, resources, players),
                    full_chain_size(2, resources, players), reduced_size(players, resources), 0, 0};
  for (const auto& s : enumerate_rrc(players, resources)) {
    row.approx_tel += tel_state_set(s).size();
    row.approx_odl += odl_state_set(s).size();
  }
  return row;
}

std::string to_csv(const ComplexityRow& row) {
  return std::to_string(row.players) + ',' + std::to_string(row.resources) + ',' + row.full_tel.str() +
         ',' + row.full_odl.str() + ',' + std::to_string(row.reduced) + ',' +
         std::to_string(row.approx_tel) + ',' + std::to_string(row.approx_odl);
}

}  // namespace telodl
