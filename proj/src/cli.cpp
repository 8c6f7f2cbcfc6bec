#include "oim/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oim/dynamics.hpp"
#include "oim/ensemble.hpp"
#include "oim/errors.hpp"
#include "oim/graph_io.hpp"
#include "oim/oracle.hpp"
#include "oim/random.hpp"
#include "oim/report.hpp"
#include "oim/spectral.hpp"

#ifndef OIM_VERSION
#define OIM_VERSION "0.0.0"
#endif

namespace oim::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MuFlags {
  std::optional<double> constant;
  std::optional<std::string> uniform;

  // Parses "a,b".
  std::optional<MuLaw> law() const {
    if (constant) return MuLaw::constant(*constant);
    if (!uniform) return std::nullopt;
    const auto comma = uniform->find(',');
    if (comma == std::string::npos) throw ArgumentError("--mu-uniform expects <a>,<b>");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string sa = uniform->substr(0, comma);
      const std::string sb = uniform->substr(comma + 1);
      const double a = std::stod(sa, &used_a);
      const double b = std::stod(sb, &used_b);
      if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument("trailing");
      return MuLaw::uniform(a, b);
    } catch (const std::logic_error&) {
      throw ArgumentError("--mu-uniform expects <a>,<b> with 0 <= a <= b");
    }
  }

  void add_to(CLI::App& app) {
    auto* c = app.add_option("--mu-const", constant, "Homogeneous regularization value");
    auto* u = app.add_option("--mu-uniform", uniform, "Regularization drawn i.i.d. from U[a,b], given as a,b");
    c->excludes(u);
  }
};

/// Draws a concrete mu vector for single-instance commands.
RegularizationVector realize_mu(const MuLaw& law, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, 0, StreamPurpose::Regularization);
  std::vector<double> mu(n);
  for (double& m : mu) m = law.draw(rng);
  return RegularizationVector(std::move(mu));
}

json spin_json(const SpinConfiguration& s) { return json(std::vector<int>(s.spins().begin(), s.spins().end())); }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path.string());
  f << text;
  if (!f) throw ArgumentError("failed writing " + path.string());
}

json manifest(const std::string& command, json parameters, std::uint64_t seed, Clock::time_point started) {
  const double seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return json{{"command", command},
              {"parameters", std::move(parameters)},
              {"seed", seed},
              {"tool_version", OIM_VERSION},
              {"wall_clock_seconds", seconds}};
}

// Data file plus "<name>.manifest.json" next to it.
void emit_result(std::ostream& out, const std::optional<std::string>& path, const json& result, const json& man) {
  const std::string text = result.dump(2) + "\n";
  out << text;
  if (path) {
    write_text(*path, text);
    write_text(*path + ".manifest.json", man.dump(2) + "\n");
  }
}

struct SolveOptions {
  std::string graph;
  MuFlags mu;
  std::size_t trials = 32;
  std::uint64_t seed = 0;
  IntegrationConfig integration;
  unsigned threads = 0;
  std::optional<std::string> out;
};

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  const auto started = Clock::now();
  const auto law = o.mu.law();
  if (!law) throw ArgumentError("solve: one of --mu-const or --mu-uniform is required");
  const GraphDocument doc = read_graph(o.graph);
  const CouplingMatrix& j = doc.couplings;
  const RegularizationVector mu = realize_mu(*law, j.size(), o.seed);
  const SolveResult res = solve(j, mu, o.trials, o.seed, o.integration, o.threads);

  json trials = json::array();
  for (std::size_t t = 0; t < res.trials.size(); ++t) {
    const auto& rec = res.trials[t];
    json jt{{"trial", t},
            {"outcome", to_string(rec.outcome)},
            {"residual", rec.residual},
            {"steps", rec.steps_taken}};
    if (rec.spin) {
      jt["spin"] = spin_json(*rec.spin);
      jt["hamiltonian"] = *rec.hamiltonian;
    } else {
      jt["final_phases"] = std::vector<double>(rec.final_state.values().begin(), rec.final_state.values().end());
    }
    trials.push_back(std::move(jt));
  }
  json result{{"command", "solve"},
              {"n", j.size()},
              {"mu", std::vector<double>(mu.values().begin(), mu.values().end())},
              {"counts",
               {{"binary", res.binary_count},
                {"non_binary", res.non_binary_count},
                {"not_converged", res.not_converged_count}}},
              {"trials", std::move(trials)}};
  if (res.best_spin) {
    const auto verdict = classify_stability(hessian(signed_laplacian(signed_adjacency(j, *res.best_spin)), mu));
    result["best"] = {{"spin", spin_json(*res.best_spin)},
                      {"hamiltonian", *res.best_energy},
                      {"lambda_min", verdict.lambda_min},
                      {"stability", to_string(verdict.kind)}};
  } else {
    result["best"] = nullptr;
  }
  json params{{"graph", o.graph},
              {"mu_law", law->label()},
              {"trials", o.trials},
              {"step", o.integration.step_size},
              {"tmax", o.integration.max_time},
              {"tol", o.integration.convergence_tol},
              {"threads", o.threads}};
  emit_result(out, o.out, result, manifest("solve", std::move(params), o.seed, started));
  if (!res.best_spin) throw NoSolution("solve: no trial reached a binary equilibrium");
  return kSuccess;
}

struct EnumerateOptions {
  std::string graph;
  MuFlags mu;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

int cmd_enumerate(const EnumerateOptions& o, std::ostream& out) {
  const auto started = Clock::now();
  const GraphDocument doc = read_graph(o.graph);
  const CouplingMatrix& j = doc.couplings;
  const EnumerationReport rep = enumerate(j);
  const auto law = o.mu.law();
  std::optional<RegularizationVector> mu;
  if (law) mu = realize_mu(*law, j.size(), o.seed);

  json configs = json::array();
  for (std::uint64_t code = 0; code < rep.energies.size(); ++code) {
    const SpinConfiguration s = SpinConfiguration::from_code(code, rep.n);
    json c{{"code", code}, {"spin", spin_json(s)}, {"energy", rep.energies[code]}, {"minimizer", rep.is_minimizer(code)}};
    if (mu) {
      const auto v = classify_stability(hessian(signed_laplacian(signed_adjacency(j, s)), *mu));
      c["lambda_min"] = v.lambda_min;
      c["stability"] = to_string(v.kind);
    }
    configs.push_back(std::move(c));
  }
  json minimizers = json::array();
  for (const auto& s : rep.minimizers) minimizers.push_back(spin_json(s));
  const bool frustration_free = is_frustration_free(j);
  json result{{"command", "enumerate"},
              {"n", rep.n},
              {"global_minimum", rep.global_minimum},
              {"minimizers", std::move(minimizers)},
              {"frustration_free", frustration_free},
              {"configurations", std::move(configs)}};
  if (mu) result["mu"] = std::vector<double>(mu->values().begin(), mu->values().end());
  if (frustration_free) {
    try {
      result["mu_star"] = mu_star(j, rep);
    } catch (const UndefinedThresholdError&) {
      result["mu_star"] = nullptr;
    }
  }
  json params{{"graph", o.graph}, {"mu_law", law ? json(law->label()) : json(nullptr)}};
  emit_result(out, o.out, result, manifest("enumerate", std::move(params), o.seed, started));
  return kSuccess;
}

struct EnsembleOptions {
  std::size_t n = 50;
  double p1 = 0.02;
  double p2 = 0.5;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  MuFlags mu;
  std::string out_dir;
  unsigned threads = 0;
  std::size_t min_bin_count = 30;
};

int cmd_ensemble(const EnsembleOptions& o, std::ostream& out) {
  const auto started = Clock::now();
  const auto law = o.mu.law();
  if (!law) throw ArgumentError("ensemble: one of --mu-const or --mu-uniform is required");
  EnsembleParams params{o.n, o.p1, o.p2, *law, o.samples, o.seed, o.min_bin_count};
  params.validate();
  const EnsembleResult res = run_ensemble(params, o.threads);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_text(dir / "moments.csv", moments_csv(params, res));
  write_text(dir / "conditional.csv", conditional_csv(res));
  write_text(dir / "fit.csv", fit_csv(params, res));
  json p{{"n", o.n},          {"p1", o.p1},       {"p2", o.p2},
         {"samples", o.samples}, {"mu_law", law->label()}, {"min_bin_count", o.min_bin_count},
         {"threads", o.threads}};
  write_text(dir / "manifest.json", manifest("ensemble", std::move(p), o.seed, started).dump(2) + "\n");
  out << moments_csv(params, res);
  return kSuccess;
}

struct GenOptions {
  std::string kind;
  std::size_t n = 0;
  double p1 = 0.0;
  std::uint64_t seed = 0;
  double max_weight = 2.0;
  std::optional<std::string> out;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  const auto started = Clock::now();
  if (o.n < 1) throw ArgumentError("gen: --n must be >= 1");
  if (!(o.p1 >= 0.0 && o.p1 <= 1.0)) throw ArgumentError("gen: --p1 must lie in [0, 1]");
  json metadata{{"kind", o.kind}, {"p1", o.p1}, {"seed", o.seed}};
  std::optional<CouplingMatrix> j;
  if (o.kind == "er") {
    RandomStream rng(o.seed, 0, StreamPurpose::ErInstance);
    j = sample_er_couplings(o.n, o.p1, rng);
  } else if (o.kind == "planted") {
    PlantedInstance inst = planted_instance(o.n, o.p1, o.seed, o.max_weight);
    metadata["max_weight"] = o.max_weight;
    metadata["planted_spins"] = spin_json(inst.planted);
    j = std::move(inst.couplings);
  } else {
    throw ArgumentError("gen: --kind must be er or planted");
  }
  const std::string text = serialize_graph(*j, metadata);
  if (o.out) {
    write_text(*o.out, text);
    json params{{"kind", o.kind}, {"n", o.n}, {"p1", o.p1}, {"max_weight", o.max_weight}};
    write_text(*o.out + ".manifest.json", manifest("gen", std::move(params), o.seed, started).dump(2) + "\n");
  } else {
    out << text;
  }
  return kSuccess;
}

void add_integration_flags(CLI::App& app, IntegrationConfig& cfg) {
  app.add_option("--step", cfg.step_size, "RK4 step size")->capture_default_str();
  app.add_option("--tmax", cfg.max_time, "Maximum integration time")->capture_default_str();
  app.add_option("--tol", cfg.convergence_tol, "Convergence threshold on max |dtheta/dt|")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oscillator Ising machine simulator and ensemble statistics", "oim"};
  app.set_version_flag("--version", OIM_VERSION);
  app.require_subcommand(1);

  SolveOptions solve_opts;
  auto* solve_cmd = app.add_subcommand("solve", "Multi-start gradient-flow solver");
  solve_cmd->add_option("--graph", solve_opts.graph, "Graph JSON file")->required();
  solve_opts.mu.add_to(*solve_cmd);
  solve_cmd->add_option("--trials", solve_opts.trials, "Number of random starts")->capture_default_str();
  solve_cmd->add_option("--seed", solve_opts.seed, "Master seed")->capture_default_str();
  add_integration_flags(*solve_cmd, solve_opts.integration);
  solve_cmd->add_option("--threads", solve_opts.threads, "Worker threads (0 = all cores)");
  solve_cmd->add_option("--out", solve_opts.out, "Write result JSON here as well");

  EnumerateOptions enum_opts;
  auto* enum_cmd = app.add_subcommand("enumerate", "Exhaustive enumeration of all spin configurations");
  enum_cmd->add_option("--graph", enum_opts.graph, "Graph JSON file")->required();
  enum_opts.mu.add_to(*enum_cmd);
  enum_cmd->add_option("--seed", enum_opts.seed, "Seed for --mu-uniform draws")->capture_default_str();
  enum_cmd->add_option("--out", enum_opts.out, "Write report JSON here as well");

  EnsembleOptions ens_opts;
  auto* ens_cmd = app.add_subcommand("ensemble", "Random-ensemble moment experiment");
  ens_cmd->add_option("--n", ens_opts.n, "Node count")->required();
  ens_cmd->add_option("--p1", ens_opts.p1, "Edge probability")->required();
  ens_cmd->add_option("--p2", ens_opts.p2, "Spin-up probability")->required();
  ens_cmd->add_option("--samples", ens_opts.samples, "Number of realizations")->required();
  ens_cmd->add_option("--seed", ens_opts.seed, "Master seed")->required();
  ens_opts.mu.add_to(*ens_cmd);
  ens_cmd->add_option("--out", ens_opts.out_dir, "Output directory")->required();
  ens_cmd->add_option("--threads", ens_opts.threads, "Worker threads (0 = all cores)");
  ens_cmd->add_option("--min-bin-count", ens_opts.min_bin_count, "Minimum bin size for fits")->capture_default_str();

  GenOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("gen", "Instance generator");
  gen_cmd->add_option("--kind", gen_opts.kind, "er | planted")->required();
  gen_cmd->add_option("--n", gen_opts.n, "Node count")->required();
  gen_cmd->add_option("--p1", gen_opts.p1, "Edge probability")->required();
  gen_cmd->add_option("--seed", gen_opts.seed, "Seed")->required();
  gen_cmd->add_option("--max-weight", gen_opts.max_weight, "Planted weight magnitude bound")->capture_default_str();
  gen_cmd->add_option("--out", gen_opts.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_opts, out);
    if (*enum_cmd) return cmd_enumerate(enum_opts, out);
    if (*ens_cmd) return cmd_ensemble(ens_opts, out);
    if (*gen_cmd) return cmd_gen(gen_opts, out);
  } catch (const NoSolution& e) {
    err << "error: " << e.what() << '\n';
    return kNoSolution;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const GraphFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsageError;
}

}  // namespace oim::cli
