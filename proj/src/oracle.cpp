#include "oim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "oim/errors.hpp"
#include "oim/random.hpp"
#include "oim/spectral.hpp"

namespace oim {

namespace {

bool within_minimum(double energy, double minimum) {
  return energy - minimum <= kMinimizerTolerance * std::max(1.0, std::abs(minimum));
}

double lambda_min_laplacian(const CouplingMatrix& j, const SpinConfiguration& s) {
  return lambda_min(signed_laplacian(signed_adjacency(j, s)).matrix());
}

double lambda_min_hessian(const CouplingMatrix& j, const SpinConfiguration& s, const RegularizationVector& mu) {
  return lambda_min(hessian(signed_laplacian(signed_adjacency(j, s)), mu).matrix());
}

}  // namespace

bool EnumerationReport::is_minimizer(std::uint64_t code) const {
  return within_minimum(energies.at(code), global_minimum);
}

EnumerationReport enumerate(const CouplingMatrix& j) {
  const std::size_t n = j.size();
  if (n > kMaxEnumerationNodes)
    throw ArgumentError("enumerate: n = " + std::to_string(n) + " exceeds the limit of " +
                        std::to_string(kMaxEnumerationNodes));
  const std::uint64_t total = std::uint64_t{1} << n;

  EnumerationReport rep;
  rep.n = n;
  rep.energies.assign(total, 0.0);

  // Walk the reflected Gray code; local[i] = sum_k J_ik s_k.
  std::vector<int> s(n, 1);
  std::vector<double> local(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) local[i] += j(i, k);
  double h = hamiltonian(j, SpinConfiguration::all_up(n));
  rep.energies[0] = h;
  std::uint64_t code = 0;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(step));
    h += 2.0 * s[flip] * local[flip];
    const double delta = -2.0 * s[flip];
    s[flip] = -s[flip];
    for (std::size_t i = 0; i < n; ++i) local[i] += j(i, flip) * delta;
    code ^= std::uint64_t{1} << flip;
    rep.energies[code] = h;
  }

  // Incremental sums drift by rounding; candidates are re-evaluated directly.
  const double approx_min = *std::min_element(rep.energies.begin(), rep.energies.end());
  std::vector<std::uint64_t> candidates;
  for (std::uint64_t c = 0; c < total; ++c)
    if (rep.energies[c] - approx_min <= 1e-6 * std::max(1.0, std::abs(approx_min))) candidates.push_back(c);
  double exact_min = std::numeric_limits<double>::infinity();
  for (std::uint64_t c : candidates) {
    rep.energies[c] = hamiltonian(j, SpinConfiguration::from_code(c, n));
    exact_min = std::min(exact_min, rep.energies[c]);
  }
  rep.global_minimum = exact_min;
  for (std::uint64_t c : candidates)
    if (within_minimum(rep.energies[c], exact_min)) rep.minimizers.push_back(SpinConfiguration::from_code(c, n));
  return rep;
}

double mu_star(const CouplingMatrix& j) { return mu_star(j, enumerate(j)); }

double mu_star(const CouplingMatrix& j, const EnumerationReport& report) {
  const std::size_t n = j.size();
  const std::uint64_t total = std::uint64_t{1} << n;
  double best = std::numeric_limits<double>::infinity();
  // L(s) == L(-s): codes with the top bit set mirror codes without it.
  const std::uint64_t half = n == 0 ? 1 : total >> 1;
  for (std::uint64_t c = 0; c < half; ++c) {
    if (report.is_minimizer(c)) continue;
    best = std::min(best, -lambda_min_laplacian(j, SpinConfiguration::from_code(c, n)));
  }
  if (!std::isfinite(best)) throw UndefinedThresholdError("mu_star: every configuration is a global minimizer");
  return best;
}

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

Theorem1Report verify_theorem1(const CouplingMatrix& j, const RegularizationVector& mu_probe,
                               const Theorem1Options& opts) {
  const std::size_t n = j.size();
  if (n > 16) throw ArgumentError("verify_theorem1: n must be <= 16");
  if (mu_probe.size() != n) throw ArgumentError("verify_theorem1: dimension mismatch");
  if (!is_frustration_free(j)) throw ArgumentError("verify_theorem1: coupling matrix is frustrated");

  const EnumerationReport rep = enumerate(j);
  Theorem1Report out;
  out.mu_star = mu_star(j, rep);
  out.minimizer_count = rep.minimizers.size();
  out.suboptimal_count = rep.energies.size() - rep.minimizers.size();

  std::vector<RegularizationVector> probes{mu_probe};
  RandomStream rng(opts.seed, 0, StreamPurpose::Probe);
  for (std::size_t k = 0; k < opts.random_mu_vectors; ++k) {
    std::vector<double> mu(n);
    for (double& m : mu) m = rng.uniform(opts.random_mu_low, opts.random_mu_high);
    probes.emplace_back(std::move(mu));
  }
  for (const auto& probe : probes) {
    bool positive = true;
    for (std::size_t i = 0; i < n; ++i) positive = positive && probe[i] > 0.0;
    if (!positive) continue;  // the claim covers strictly positive mu only
    for (const auto& s : rep.minimizers) {
      const double lmin = lambda_min_hessian(j, s, probe);
      if (classify_stability(lmin).kind != Stability::Stable) {
        out.minimizers_stable = CheckStatus::Fail;
        out.minimizer_violations.push_back({s, {probe.values().begin(), probe.values().end()}, lmin});
      }
    }
  }

  if (mu_probe.max() < out.mu_star && std::all_of(mu_probe.values().begin(), mu_probe.values().end(),
                                                   [](double m) { return m > 0.0; })) {
    out.suboptimal_unstable = CheckStatus::Pass;
    for (std::uint64_t c = 0; c < rep.energies.size(); ++c) {
      if (rep.is_minimizer(c)) continue;
      const SpinConfiguration s = SpinConfiguration::from_code(c, n);
      const double lmin = lambda_min_hessian(j, s, mu_probe);
      if (classify_stability(lmin).kind != Stability::Unstable) {
        out.suboptimal_unstable = CheckStatus::Fail;
        out.suboptimal_violations.push_back({s, {mu_probe.values().begin(), mu_probe.values().end()}, lmin});
      }
    }
  }
  return out;
}

PlantedInstance planted_instance(std::size_t n, double p1, std::uint64_t seed, double max_weight) {
  if (n == 0) throw ArgumentError("planted_instance: n must be positive");
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw ArgumentError("planted_instance: p1 must lie in [0, 1]");
  if (!(max_weight > 0.0)) throw ArgumentError("planted_instance: max_weight must be positive");
  RandomStream rng(seed, 0, StreamPurpose::PlantedInstance);
  std::vector<int> spins(n);
  for (int& s : spins) s = rng.bernoulli(0.5) ? 1 : -1;
  Matrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const bool edge = rng.bernoulli(p1);
      const double magnitude = max_weight * (1.0 - rng.uniform());  // (0, max_weight]
      if (!edge) continue;
      w(i, k) = w(k, i) = spins[i] * spins[k] * magnitude;
    }
  }
  return {CouplingMatrix(std::move(w)), SpinConfiguration(std::move(spins))};
}

}  // namespace oim
