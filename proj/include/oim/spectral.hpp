#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "oim/ising.hpp"
#include "oim/matrix.hpp"

namespace oim {

/// Ascending eigenvalues of a symmetric matrix. `residual_bound` is
/// max_k |M v_k - l_k v_k|_inf / max(1, |l_k|), present when eigenvectors were formed.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::optional<double> residual_bound;
};

/// Eigenvalues ascending with matching eigenvectors stored as columns.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm drops below this times ||M||_F.
  double relative_tolerance = 1e-12;
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver. Throws ArgumentError for asymmetric input (1e-12
/// entrywise) and NumericalError if it fails to converge.
EigenDecomposition symmetric_eigen(const Matrix& m, const JacobiOptions& opts = {});

/// Eigenvalues only; skips eigenvector accumulation.
std::vector<double> symmetric_eigenvalues(const Matrix& m, const JacobiOptions& opts = {});

/// Eigenvalues only, solving each connected block of the off-diagonal sparsity
/// pattern separately. Same spectrum as symmetric_eigenvalues, much cheaper on
/// sparse graphs.
std::vector<double> blockwise_eigenvalues(const Matrix& m, const JacobiOptions& opts = {});

/// Full spectrum with residual bound; the accepted residual is <= 1e-8.
Spectrum eigenvalues_symmetric(const Matrix& m);

double lambda_min(const Matrix& m);

enum class Stability { Stable, Unstable, Marginal };

inline constexpr double kMarginalBand = 1e-9;

struct StabilityVerdict {
  Stability kind;
  double lambda_min;
};

StabilityVerdict classify_stability(double lambda_min, double tol = kMarginalBand);
StabilityVerdict classify_stability(const HessianMatrix& h, double tol = kMarginalBand);

const char* to_string(Stability s) noexcept;

}  // namespace oim
