#pragma once

// Exhaustive ground truth for small instances.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "oim/ising.hpp"

namespace oim {

inline constexpr std::size_t kMaxEnumerationNodes = 24;

struct EnumerationReport {
  std::size_t n = 0;
  /// energies[code] = H(SpinConfiguration::from_code(code, n)), all 2^n codes.
  std::vector<double> energies;
  double global_minimum = 0.0;
  /// Sorted by code; closed under global spin flip.
  std::vector<SpinConfiguration> minimizers;

  bool is_minimizer(std::uint64_t code) const;
};

/// Relative tolerance used to decide ties with the global minimum.
inline constexpr double kMinimizerTolerance = 1e-9;

/// Gray-code enumeration over all 2^n spin configurations (n <= 24).
EnumerationReport enumerate(const CouplingMatrix& j);

/// min over suboptimal s of -lambda_min(L(s)). Throws UndefinedThresholdError
/// when every configuration is optimal.
double mu_star(const CouplingMatrix& j);
double mu_star(const CouplingMatrix& j, const EnumerationReport& report);

struct StabilityCounterexample {
  SpinConfiguration spin;
  std::vector<double> mu;
  double lambda_min;
};

enum class CheckStatus { Pass, Fail, NotApplicable };

const char* to_string(CheckStatus s) noexcept;

struct Theorem1Report {
  double mu_star = 0.0;
  std::size_t minimizer_count = 0;
  std::size_t suboptimal_count = 0;
  /// Every minimizer has lambda_min(H) > 0 for the probe mu and the random mu vectors.
  CheckStatus minimizers_stable = CheckStatus::Pass;
  std::vector<StabilityCounterexample> minimizer_violations;
  /// With every mu_i < mu_star, every suboptimal configuration has lambda_min(H) < 0.
  CheckStatus suboptimal_unstable = CheckStatus::NotApplicable;
  std::vector<StabilityCounterexample> suboptimal_violations;

  bool passed() const noexcept {
    return minimizers_stable != CheckStatus::Fail && suboptimal_unstable != CheckStatus::Fail;
  }
};

struct Theorem1Options {
  std::size_t random_mu_vectors = 10;
  double random_mu_low = 0.01;
  double random_mu_high = 10.0;
  std::uint64_t seed = 0;
};

/// Checks both stability claims for a frustration-free J (n <= 16) exhaustively.
/// Throws ArgumentError on a frustrated J.
Theorem1Report verify_theorem1(const CouplingMatrix& j, const RegularizationVector& mu_probe,
                               const Theorem1Options& opts = {});

struct PlantedInstance {
  CouplingMatrix couplings;
  SpinConfiguration planted;
};

/// Frustration-free instance: each pair becomes an edge with probability p1 and
/// weight planted_i * planted_j * w, with w uniform on (0, max_weight].
PlantedInstance planted_instance(std::size_t n, double p1, std::uint64_t seed, double max_weight = 2.0);

}  // namespace oim
