#pragma once

// Random antiferromagnetic ensemble with i.i.d. spins and regularization:
//   J_ij in {0, -1} with P(-1) = p1, s_i = +1 with probability p2, mu_i ~ law.
// Empirical spectral/energy statistics and their closed-form predictions.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oim/ising.hpp"
#include "oim/random.hpp"

namespace oim {

/// Distribution of each mu_i: constant, or uniform on [a, b].
class MuLaw {
 public:
  static MuLaw constant(double value);
  static MuLaw uniform(double a, double b);

  bool is_constant() const noexcept { return constant_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  double mean() const noexcept { return 0.5 * (a_ + b_); }
  double variance() const noexcept { return (b_ - a_) * (b_ - a_) / 12.0; }
  double second_moment() const noexcept { return (a_ * a_ + a_ * b_ + b_ * b_) / 3.0; }

  double draw(RandomStream& rng) const noexcept { return constant_ ? a_ : rng.uniform(a_, b_); }
  /// "const:<v>" or "uniform:<a>:<b>".
  std::string label() const;

 private:
  MuLaw(bool constant, double a, double b) : constant_(constant), a_(a), b_(b) {}
  bool constant_;
  double a_;
  double b_;
};

struct EnsembleParams {
  std::size_t n = 50;
  double p1 = 0.02;
  double p2 = 0.5;
  MuLaw mu_law = MuLaw::constant(1.0);
  std::size_t samples = 100000;
  std::uint64_t master_seed = 0;
  std::size_t min_bin_count = 30;

  void validate() const;
};

struct EnsembleInstance {
  CouplingMatrix couplings;
  SpinConfiguration spins;
  RegularizationVector mu;
};

/// ER couplings in {0, -1}, one Bernoulli(p1) draw per pair in row-major i < j order.
CouplingMatrix sample_er_couplings(std::size_t n, double p1, RandomStream& rng);

/// Draws J, then s, then mu from the stream addressed by (master_seed, index).
EnsembleInstance sample_instance(const EnsembleParams& params, std::size_t index);

struct SampleRecord {
  double hamiltonian_value;
  std::vector<double> eigenvalues;  // ascending, of H(s, mu)
  double lambda_min;
};

/// Builds A, L, H for sample `index`, solves the spectrum and checks the trace identity.
SampleRecord evaluate_sample(const EnsembleParams& params, std::size_t index);

/// E[A_ij^k]: -p1 (2 p2 - 1)^2 for odd k, p1 for even k.
double adjacency_moment(unsigned k, double p1, double p2);

struct Moments {
  double mean;
  double variance;
};

Moments hamiltonian_moments(const EnsembleParams& params);

/// What variance expression to use for a uniformly drawn Hessian eigenvalue.
/// The two agree when p2 = 1/2.
enum class VarianceForm {
  /// (N-1)(N-2)E[J]^2E[s]^2 + 2(N-1)E[J^2] + 2(N-1)E[mu]E[A] + (N-1)^2E[A]^2 + 4Var[mu]
  AsPublished,
  /// E[lambda^2] - E[lambda]^2 expanded directly:
  /// (N-1)(N-2)E[J]^2E[s]^2 + 2(N-1)E[J^2] - (N-1)^2E[A]^2 + 4Var[mu]
  DirectExpansion,
};

Moments eigenvalue_moments(const EnsembleParams& params, VarianceForm form = VarianceForm::AsPublished);

/// E[lambda | H = h] = -2h/N + (a + b).
double conditional_mean_prediction(double h, std::size_t n, double a, double b);

/// (c/N - 4/N^2) h^2 + (b - a)^2/3 + 2(N-1) p1.
double conditional_variance_prediction(double h, std::size_t n, double p1, double a, double b, double c);

struct MomentReport {
  double empirical_mean_H = 0, empirical_var_H = 0, analytic_mean_H = 0, analytic_var_H = 0;
  double empirical_mean_lambda = 0, empirical_var_lambda = 0, analytic_mean_lambda = 0, analytic_var_lambda = 0;
  double se_mean_H = 0, se_var_H = 0, se_mean_lambda = 0, se_var_lambda = 0;
};

struct ConditionalBin {
  std::int64_t h = 0;
  std::size_t count = 0;
  double mean_lambda = 0;
  double mean_lambda_sq = 0;
  double var_lambda = 0;
  double mean_lambda_min = 0;
  double frac_stable = 0;
  double predicted_mean = 0;
  std::optional<double> predicted_var;
  bool excluded = false;
};

using ConditionalBins = std::map<std::int64_t, ConditionalBin>;

struct CFit {
  double c = 0;
  double standard_error = 0;
  std::vector<std::int64_t> regression_set;
};

/// Weighted least squares for the quadratic coefficient of E[T | H = h] with the
/// intercept 2N(N-1)p1 and slope -4(a+b) held fixed; weights are bin counts.
/// Throws InsufficientDataError with fewer than 3 admissible bins.
CFit fit_c(const ConditionalBins& bins, const EnsembleParams& params);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::size_t bins_used = 0;
};

/// Count-weighted regression of binned mean(lambda | h) on h over admissible bins.
/// Throws InsufficientDataError with fewer than 2 admissible bins.
LineFit fit_conditional_mean(const ConditionalBins& bins);

/// Per-sample reductions kept for order-independent accumulation.
struct SampleSummary {
  std::int64_t h;
  double sum_lambda;
  double sum_lambda_sq;
  double lambda_min;
  double sum_mu;
};

struct EnsembleResult {
  MomentReport moments;
  ConditionalBins bins;
  std::optional<CFit> fit;          // absent when too few admissible bins
  std::optional<LineFit> mean_fit;  // absent with fewer than 2 admissible bins
  std::vector<SampleSummary> samples;
};

/// Samples are evaluated in parallel and reduced serially in index order, so
/// the result is bitwise identical for every `threads` value.
EnsembleResult run_ensemble(const EnsembleParams& params, unsigned threads = 1);

}  // namespace oim
