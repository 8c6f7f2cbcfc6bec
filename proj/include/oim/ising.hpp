#pragma once

// Ising model on a weighted graph and the signed-graph matrices attached to a
// spin configuration: A(s)_ij = J_ij s_i s_j, L(s) = D(s) - A(s), H = L + 2 diag(mu).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oim/matrix.hpp"

namespace oim {

/// Entries with magnitude below this are treated as "no edge".
inline constexpr double kEdgeEpsilon = 1e-15;

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Symmetric coupling matrix J with zero diagonal and finite entries.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(Matrix weights);
  /// Builds J from an unordered edge list (i != j, no duplicates).
  static CouplingMatrix from_edges(std::size_t n, std::span<const Edge> edges);
  static CouplingMatrix empty(std::size_t n) { return CouplingMatrix(Matrix(n)); }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return weights_(i, j); }
  const Matrix& weights() const noexcept { return weights_; }

  /// Edges with i < j and |w| >= kEdgeEpsilon, in row-major order.
  std::vector<Edge> edges() const;

  friend bool operator==(const CouplingMatrix&, const CouplingMatrix&) = default;

 private:
  Matrix weights_;
};

/// Spin vector with entries in {-1, +1}.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::vector<int> spins);

  /// Bit i of `code` set means spin i is down (-1).
  static SpinConfiguration from_code(std::uint64_t code, std::size_t n);
  static SpinConfiguration all_up(std::size_t n);

  std::uint64_t code() const noexcept;
  std::size_t size() const noexcept { return spins_.size(); }
  int operator[](std::size_t i) const noexcept { return spins_[i]; }
  std::span<const int> spins() const noexcept { return spins_; }

  SpinConfiguration flipped() const;
  SpinConfiguration with_flip(std::size_t i) const;

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  std::vector<int> spins_;
};

/// Per-oscillator regularization parameters, all finite and nonnegative.
class RegularizationVector {
 public:
  RegularizationVector() = default;
  explicit RegularizationVector(std::vector<double> mu);
  static RegularizationVector constant(std::size_t n, double value);

  std::size_t size() const noexcept { return mu_.size(); }
  double operator[](std::size_t i) const noexcept { return mu_[i]; }
  std::span<const double> values() const noexcept { return mu_; }
  double max() const noexcept;
  double sum() const noexcept;

 private:
  std::vector<double> mu_;
};

class SignedAdjacency {
 public:
  /// Validates symmetry and zero diagonal.
  explicit SignedAdjacency(Matrix entries);
  std::size_t size() const noexcept { return entries_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  Matrix entries_;
};

class SignedLaplacian {
 public:
  std::size_t size() const noexcept { return entries_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  friend SignedLaplacian signed_laplacian(const SignedAdjacency& a);
  explicit SignedLaplacian(Matrix entries) : entries_(std::move(entries)) {}
  Matrix entries_;
};

class HessianMatrix {
 public:
  std::size_t size() const noexcept { return entries_.size(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_(i, j); }
  const Matrix& matrix() const noexcept { return entries_; }

 private:
  friend HessianMatrix hessian(const SignedLaplacian& l, const RegularizationVector& mu);
  friend HessianMatrix hessian_entrywise(const CouplingMatrix& j, const SpinConfiguration& sigma,
                                         const RegularizationVector& mu);
  explicit HessianMatrix(Matrix entries) : entries_(std::move(entries)) {}
  Matrix entries_;
};

/// -(1/2) sum_i sum_j J_ij s_i s_j over ordered pairs.
double hamiltonian(const CouplingMatrix& j, const SpinConfiguration& sigma);

SignedAdjacency signed_adjacency(const CouplingMatrix& j, const SpinConfiguration& sigma);
SignedLaplacian signed_laplacian(const SignedAdjacency& a);

/// -(1/2) tr L(s); equals hamiltonian() for the generating (J, s).
double hamiltonian_from_trace(const SignedLaplacian& l);

HessianMatrix hessian(const SignedLaplacian& l, const RegularizationVector& mu);

/// Hessian of the oscillator energy at theta*(s), assembled entry by entry from
/// J, s and mu without going through the Laplacian.
HessianMatrix hessian_entrywise(const CouplingMatrix& j, const SpinConfiguration& sigma,
                                const RegularizationVector& mu);

/// Witness configuration satisfying every edge (J_ij s_i s_j > 0), if one exists.
std::optional<SpinConfiguration> frustration_free_witness(const CouplingMatrix& j);
bool is_frustration_free(const CouplingMatrix& j);

/// Two-set partition with positive edges inside and negative edges across.
struct BalancedPartition {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

std::optional<BalancedPartition> structural_balance(const SignedAdjacency& a);
bool is_structurally_balanced(const SignedAdjacency& a);

/// Unordered pairs {i, j} with A_ij < 0.
std::size_t negative_edge_count(const SignedAdjacency& a);

}  // namespace oim
