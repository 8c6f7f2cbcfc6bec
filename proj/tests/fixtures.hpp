#pragma once

// Shared instances and test-only oracles. The oracles here deliberately avoid
// the library's solver paths (no Jacobi, no Gray code).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "oim/ising.hpp"
#include "oim/matrix.hpp"

namespace oim::testing {

inline CouplingMatrix triangle() {
  Matrix w(3, -1.0);
  for (std::size_t i = 0; i < 3; ++i) w(i, i) = 0.0;
  return CouplingMatrix(std::move(w));
}

inline CouplingMatrix antiferro_pair() {
  Matrix w(2);
  w(0, 1) = w(1, 0) = -1.0;
  return CouplingMatrix(std::move(w));
}

inline SpinConfiguration spins(std::initializer_list<int> s) { return SpinConfiguration(std::vector<int>(s)); }

/// Dense random couplings with weights uniform on [-1, 1] and edge probability `density`.
inline CouplingMatrix random_couplings(std::size_t n, std::mt19937_64& rng, double density = 1.0) {
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::bernoulli_distribution edge(density);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (edge(rng)) m(i, k) = m(k, i) = w(rng);
  return CouplingMatrix(std::move(m));
}

inline SpinConfiguration random_spins(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution up(0.5);
  std::vector<int> s(n);
  for (int& x : s) x = up(rng) ? 1 : -1;
  return SpinConfiguration(std::move(s));
}

inline RegularizationVector random_mu(std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> m(n);
  for (double& x : m) x = u(rng);
  return RegularizationVector(std::move(m));
}

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i; k < n; ++k) m(i, k) = m(k, i) = u(rng);
  return m;
}

/// Direct O(2^n n^2) minimum of the Hamiltonian, straight from the double sum.
inline double brute_force_minimum(const CouplingMatrix& j) {
  const std::size_t n = j.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const int sa = (code >> a) & 1u ? -1 : 1;
        const int sb = (code >> b) & 1u ? -1 : 1;
        sum += j(a, b) * sa * sb;
      }
    best = std::min(best, -0.5 * sum);
  }
  return best;
}

/// Roots of the characteristic polynomial of a symmetric 3x3 matrix, ascending
/// (trigonometric form of the cubic).
inline std::array<double, 3> char_poly_eigenvalues(const Matrix& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> d{a(0, 0), a(1, 1), a(2, 2)};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) + (a(2, 2) - q) * (a(2, 2) - q) +
                    2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix b(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) b(i, k) = (a(i, k) - (i == k ? q : 0.0)) / p;
  const double det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                       b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                       b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> out{e1, e2, e3};
  std::sort(out.begin(), out.end());
  return out;
}

/// Determinant by LU with partial pivoting.
inline double lu_determinant(Matrix a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return det;
}

}  // namespace oim::testing
