#pragma once

// Oscillator network gradient flow
//   dtheta_i/dt = sum_j J_ij sin(theta_j - theta_i) - mu_i sin(2 theta_i)
// on the N-torus, and its energy
//   E(theta) = -1/2 sum_ij J_ij cos(theta_i - theta_j) + sum_i mu_i sin^2(theta_i).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oim/ising.hpp"
#include "oim/matrix.hpp"

namespace oim {

/// Phases wrapped into [0, 2 pi).
class PhaseState {
 public:
  PhaseState() = default;
  explicit PhaseState(std::vector<double> theta);

  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t i) const noexcept { return theta_[i]; }
  std::span<const double> values() const noexcept { return theta_; }

  friend bool operator==(const PhaseState&, const PhaseState&) = default;

 private:
  std::vector<double> theta_;
};

double wrap_phase(double theta) noexcept;

struct IntegrationConfig {
  double step_size = 0.01;
  double max_time = 500.0;
  double convergence_tol = 1e-6;
  bool record_energy = false;
  /// Phase-to-spin rounding used when classifying the endpoint.
  double rounding_tol = 0.1;

  void validate() const;
};

struct EnergySample {
  double time;
  double energy;
  friend bool operator==(const EnergySample&, const EnergySample&) = default;
};

struct TrajectoryResult {
  PhaseState final_state;
  bool converged = false;
  /// Present only when converged and every phase rounds to 0 or pi.
  std::optional<SpinConfiguration> classified_spin;
  /// max_i |dtheta_i/dt| at termination.
  double residual = 0.0;
  std::vector<EnergySample> energy_trace;
  std::size_t steps_taken = 0;

  friend bool operator==(const TrajectoryResult&, const TrajectoryResult&) = default;
};

std::vector<double> rhs(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta);
double energy(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta);
std::vector<double> grad_energy(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta);

/// Full Hessian of E at an arbitrary phase state.
Matrix energy_hessian(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta);

/// Fixed-step classical RK4; stops when max |rhs| < convergence_tol or at max_time.
TrajectoryResult integrate(const CouplingMatrix& j, const RegularizationVector& mu, const PhaseState& theta0,
                           const IntegrationConfig& cfg);

/// Rounds phases near 0 to +1 and near pi to -1; nullopt if any phase is near neither.
std::optional<SpinConfiguration> classify_equilibrium(const PhaseState& theta, double rounding_tol);

PhaseState spin_to_phase(const SpinConfiguration& sigma);

enum class TrialOutcome { Binary, NonBinary, NotConverged };

const char* to_string(TrialOutcome o) noexcept;

struct TrialRecord {
  TrialOutcome outcome;
  std::optional<SpinConfiguration> spin;
  std::optional<double> hamiltonian;
  double residual;
  std::size_t steps_taken;
  PhaseState final_state;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct SolveResult {
  std::optional<SpinConfiguration> best_spin;
  std::optional<double> best_energy;
  std::vector<TrialRecord> trials;
  std::size_t binary_count = 0;
  std::size_t non_binary_count = 0;
  std::size_t not_converged_count = 0;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

/// Multi-start wrapper: trial k starts from uniform phases drawn from the stream
/// (seed, k), so results do not depend on `threads`.
SolveResult solve(const CouplingMatrix& j, const RegularizationVector& mu, std::size_t trials, std::uint64_t seed,
                  const IntegrationConfig& cfg, unsigned threads = 1);

}  // namespace oim
