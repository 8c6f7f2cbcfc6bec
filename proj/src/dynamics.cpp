#include "oim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oim/errors.hpp"
#include "oim/parallel.hpp"
#include "oim/random.hpp"

namespace oim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_sizes(const CouplingMatrix& j, const RegularizationVector& mu, std::size_t n, const char* what) {
  if (j.size() != mu.size() || j.size() != n)
    throw ArgumentError(std::string(what) + ": dimension mismatch");
}

void field(const CouplingMatrix& j, std::span<const double> mu, std::span<const double> theta,
           std::span<double> out) {
  const std::size_t n = theta.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const auto row = j.weights().row(i);
    for (std::size_t k = 0; k < n; ++k)
      if (row[k] != 0.0) s += row[k] * std::sin(theta[k] - theta[i]);
    out[i] = s - mu[i] * std::sin(2.0 * theta[i]);
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double wrap_phase(double theta) noexcept {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2 pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

PhaseState::PhaseState(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double& t : theta_) {
    if (!std::isfinite(t)) throw ArgumentError("PhaseState: non-finite phase");
    t = wrap_phase(t);
  }
}

void IntegrationConfig::validate() const {
  if (!(step_size > 0.0)) throw ArgumentError("IntegrationConfig: step_size must be positive");
  if (!(max_time >= step_size)) throw ArgumentError("IntegrationConfig: max_time must be >= step_size");
  if (!(convergence_tol > 0.0)) throw ArgumentError("IntegrationConfig: convergence_tol must be positive");
  if (!(rounding_tol > 0.0 && rounding_tol < std::numbers::pi / 4))
    throw ArgumentError("IntegrationConfig: rounding_tol must lie in (0, pi/4)");
}

std::vector<double> rhs(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta) {
  check_sizes(j, mu, theta.size(), "rhs");
  std::vector<double> out(theta.size());
  field(j, mu.values(), theta.values(), out);
  return out;
}

double energy(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta) {
  check_sizes(j, mu, theta.size(), "energy");
  const std::size_t n = theta.size();
  double coupling = 0.0;
  double injection = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k)
      if (j(i, k) != 0.0) coupling += j(i, k) * std::cos(theta[i] - theta[k]);
    const double s = std::sin(theta[i]);
    injection += mu[i] * s * s;
  }
  return -0.5 * coupling + injection;
}

std::vector<double> grad_energy(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta) {
  check_sizes(j, mu, theta.size(), "grad_energy");
  const std::size_t n = theta.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (j(i, k) != 0.0) s += j(i, k) * std::sin(theta[i] - theta[k]);
    g[i] = s + 2.0 * mu[i] * std::sin(theta[i]) * std::cos(theta[i]);
  }
  return g;
}

Matrix energy_hessian(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta) {
  check_sizes(j, mu, theta.size(), "energy_hessian");
  const std::size_t n = theta.size();
  Matrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || j(i, k) == 0.0) continue;
      const double c = j(i, k) * std::cos(theta[i] - theta[k]);
      diag += c;
      h(i, k) = -c;
    }
    h(i, i) = diag + 2.0 * mu[i] * std::cos(2.0 * theta[i]);
  }
  return h;
}

TrajectoryResult integrate(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta0,
                           const IntegrationConfig& cfg) {
  cfg.validate();
  check_sizes(j, mu, theta0.size(), "integrate");
  const std::size_t n = theta0.size();
  const double h = cfg.step_size;
  const auto max_steps = static_cast<std::size_t>(std::floor(cfg.max_time / h + 1e-9));
  const auto mu_v = mu.values();

  std::vector<double> x(theta0.values().begin(), theta0.values().end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

  TrajectoryResult result;
  auto record = [&](std::size_t step) {
    if (cfg.record_energy)
      result.energy_trace.push_back({static_cast<double>(step) * h, energy(j, mu, PhaseState(x))});
  };

  field(j, mu_v, x, k1);
  record(0);
  std::size_t step = 0;
  double residual = max_abs(k1);
  while (residual >= cfg.convergence_tol && step < max_steps) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field(j, mu_v, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field(j, mu_v, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    field(j, mu_v, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      const double next = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(next)) throw NumericalError("integrate: integration diverged (non-finite phase)");
      x[i] = wrap_phase(next);
    }
    ++step;
    field(j, mu_v, x, k1);
    residual = max_abs(k1);
    record(step);
  }

  result.final_state = PhaseState(x);
  result.converged = residual < cfg.convergence_tol;
  result.residual = residual;
  result.steps_taken = step;
  if (result.converged) result.classified_spin = classify_equilibrium(result.final_state, cfg.rounding_tol);
  return result;
}

std::optional<SpinConfiguration> classify_equilibrium(const PhaseState& theta, double rounding_tol) {
  if (!(rounding_tol > 0.0 && rounding_tol < std::numbers::pi / 4))
    throw ArgumentError("classify_equilibrium: rounding_tol must lie in (0, pi/4)");
  std::vector<int> spins(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t = theta[i];
    const double to_zero = std::min(t, kTwoPi - t);
    if (to_zero <= rounding_tol) {
      spins[i] = 1;
    } else if (std::abs(t - std::numbers::pi) <= rounding_tol) {
      spins[i] = -1;
    } else {
      return std::nullopt;
    }
  }
  return SpinConfiguration(std::move(spins));
}

PhaseState spin_to_phase(const SpinConfiguration& sigma) {
  std::vector<double> theta(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) theta[i] = sigma[i] > 0 ? 0.0 : std::numbers::pi;
  return PhaseState(std::move(theta));
}

const char* to_string(TrialOutcome o) noexcept {
  switch (o) {
    case TrialOutcome::Binary: return "binary";
    case TrialOutcome::NonBinary: return "non_binary";
    case TrialOutcome::NotConverged: return "not_converged";
  }
  return "unknown";
}

SolveResult solve(const CouplingMatrix& j, const RegularizationVector& mu, std::size_t trials, std::uint64_t seed,
                  const IntegrationConfig& cfg, unsigned threads) {
  if (trials < 1) throw ArgumentError("solve: trials must be >= 1");
  cfg.validate();
  check_sizes(j, mu, j.size(), "solve");
  const std::size_t n = j.size();

  SolveResult out;
  out.trials.resize(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    RandomStream rng(seed, t, StreamPurpose::SolverTrial);
    std::vector<double> theta0(n);
    for (double& x : theta0) x = rng.uniform(0.0, kTwoPi);
    TrajectoryResult tr = integrate(j, mu, PhaseState(std::move(theta0)), cfg);
    TrialRecord rec{TrialOutcome::NotConverged, std::nullopt, std::nullopt, tr.residual, tr.steps_taken,
                    tr.final_state};
    if (tr.converged) {
      if (tr.classified_spin) {
        rec.outcome = TrialOutcome::Binary;
        rec.hamiltonian = hamiltonian(j, *tr.classified_spin);
        rec.spin = std::move(tr.classified_spin);
      } else {
        rec.outcome = TrialOutcome::NonBinary;
      }
    }
    out.trials[t] = std::move(rec);
  });

  for (const auto& rec : out.trials) {
    switch (rec.outcome) {
      case TrialOutcome::Binary:
        ++out.binary_count;
        // Ties keep the earliest trial.
        if (!out.best_energy || *rec.hamiltonian < *out.best_energy) {
          out.best_energy = rec.hamiltonian;
          out.best_spin = rec.spin;
        }
        break;
      case TrialOutcome::NonBinary: ++out.non_binary_count; break;
      case TrialOutcome::NotConverged: ++out.not_converged_count; break;
    }
  }
  return out;
}

}  // namespace oim
