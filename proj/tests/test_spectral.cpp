#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oim/errors.hpp"
#include "oim/spectral.hpp"

using namespace oim;
using namespace oim::testing;

namespace {

double residual(const Matrix& m, const EigenDecomposition& d, std::size_t k) {
  const std::size_t n = m.size();
  std::vector<double> v(n);
  for (std::size_t r = 0; r < n; ++r) v[r] = d.eigenvectors(r, k);
  const auto mv = m.multiply(v);
  double worst = 0.0;
  for (std::size_t r = 0; r < n; ++r) worst = std::max(worst, std::abs(mv[r] - d.eigenvalues[k] * v[r]));
  return worst;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("diagonal input") {
  const std::vector<double> d{3.0, 1.0, 2.0};
  const auto ev = symmetric_eigenvalues(Matrix::diagonal(d));
  CHECK(ev == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(lambda_min(Matrix::identity(4)) == 1.0);
}

TEST_CASE("3x3 spectra agree with characteristic polynomial roots") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 500; ++t) {
    const auto m = random_symmetric(3, rng);
    const auto expected = char_poly_eigenvalues(m);
    const auto ev = symmetric_eigenvalues(m);
    for (std::size_t k = 0; k < 3; ++k) CHECK(ev[k] == doctest::Approx(expected[k]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("triangle hessian at a minimizer") {
  const auto l = signed_laplacian(signed_adjacency(triangle(), spins({1, 1, -1})));
  const auto h = hessian(l, RegularizationVector::constant(3, 0.1));
  const auto verdict = classify_stability(h);
  CHECK(verdict.kind == Stability::Unstable);
  CHECK(verdict.lambda_min == doctest::Approx(-0.8));
  CHECK(classify_stability(hessian(l, RegularizationVector::constant(3, 10.0))).kind == Stability::Stable);
}

TEST_CASE("marginal band") {
  CHECK(classify_stability(lambda_min(Matrix(3))).kind == Stability::Marginal);
  CHECK(classify_stability(5e-10).kind == Stability::Marginal);
  CHECK(classify_stability(-5e-10).kind == Stability::Marginal);
  CHECK(classify_stability(2e-9).kind == Stability::Stable);
  CHECK(classify_stability(-2e-9).kind == Stability::Unstable);
  CHECK(std::string(to_string(Stability::Marginal)) == "marginal");
}

TEST_CASE("positive signed graphs have PSD Laplacians") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 30;
    Matrix m(n);
    std::uniform_real_distribution<double> w(0.0, 3.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k)
        if (rng() % 3 == 0) m(i, k) = m(k, i) = w(rng);
    const auto l = signed_laplacian(SignedAdjacency(m));
    CHECK(lambda_min(l.matrix()) >= -1e-10);
  }
}

TEST_CASE("rejects bad input") {
  Matrix asym(2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(symmetric_eigenvalues(asym), ArgumentError);
  Matrix nan(2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(symmetric_eigenvalues(nan), ArgumentError);
  CHECK_THROWS_AS(symmetric_eigenvalues(Matrix()), ArgumentError);
}

TEST_CASE("eigenpairs have small residuals and sorted eigenvalues") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + rng() % 40;
    const auto m = random_symmetric(n, rng);
    const auto d = symmetric_eigen(m);
    CHECK(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    for (std::size_t k = 0; k < n; ++k) CHECK(residual(m, d, k) <= 1e-8 * std::max(1.0, std::abs(d.eigenvalues[k])));
    const auto s = eigenvalues_symmetric(m);
    REQUIRE(s.residual_bound.has_value());
    CHECK(*s.residual_bound <= 1e-8);
  }
}

TEST_CASE("trace and determinant match LU") {
  std::mt19937_64 rng(37);
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto m = random_symmetric(n, rng);
    const auto ev = symmetric_eigenvalues(m);
    const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
    const double prod = std::accumulate(ev.begin(), ev.end(), 1.0, std::multiplies<>());
    CHECK(std::abs(sum - m.trace()) <= 1e-10 * std::max(1.0, m.frobenius_norm()));
    const double det = lu_determinant(m);
    CHECK(std::abs(prod - det) <= 1e-6 * std::max(1e-8, std::abs(det)) + 1e-12);
  }
}

TEST_CASE("shift equivariance") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 25;
    const auto m = random_symmetric(n, rng);
    const double c = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    const auto base = symmetric_eigenvalues(m);
    const auto shifted = symmetric_eigenvalues(m + c * Matrix::identity(n));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(shifted[k] - (base[k] + c)) <= 1e-9 * std::max(1.0, std::abs(c)));
  }
}

TEST_CASE("blockwise solve matches the full solve") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 50;
    const auto j = random_couplings(n, rng, 2.0 / static_cast<double>(n));
    const auto mu = random_mu(n, rng);
    const auto h = hessian(signed_laplacian(signed_adjacency(j, random_spins(n, rng))), mu).matrix();
    const auto full = symmetric_eigenvalues(h);
    const auto blocks = blockwise_eigenvalues(h);
    REQUIRE(full.size() == blocks.size());
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(full[k] - blocks[k]) <= 1e-10);
  }
}

}  // TEST_SUITE
