#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oim/dynamics.hpp"
#include "oim/errors.hpp"
#include "oim/ising.hpp"
#include "oim/spectral.hpp"

using namespace oim;
using namespace oim::testing;

TEST_SUITE("ising") {

TEST_CASE("hamiltonian on the antiferromagnetic triangle") {
  const auto j = triangle();
  CHECK(hamiltonian(j, spins({1, 1, 1})) == 3.0);
  CHECK(hamiltonian(j, spins({1, -1, 1})) == -1.0);
  CHECK(hamiltonian(CouplingMatrix::empty(4), spins({1, -1, 1, 1})) == 0.0);
  CHECK_THROWS_AS(hamiltonian(j, spins({1, 1})), ArgumentError);
}

TEST_CASE("triangle ground state found by direct search") {
  CHECK(brute_force_minimum(triangle()) == -1.0);
  CHECK(brute_force_minimum(antiferro_pair()) == -1.0);
}

TEST_CASE("constructors reject malformed input") {
  Matrix asym(2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(CouplingMatrix{asym}, ArgumentError);
  Matrix diag(2);
  diag(0, 0) = 1.0;
  CHECK_THROWS_AS(CouplingMatrix{diag}, ArgumentError);
  Matrix nan(2);
  nan(0, 1) = nan(1, 0) = std::nan("");
  CHECK_THROWS_AS(CouplingMatrix{nan}, ArgumentError);
  CHECK_THROWS_AS(SpinConfiguration(std::vector<int>{1, 0}), ArgumentError);
  CHECK_THROWS_AS(RegularizationVector(std::vector<double>{1.0, -0.5}), ArgumentError);
}

TEST_CASE("spin codes") {
  const auto s = SpinConfiguration::from_code(0b101, 3);
  CHECK(s == spins({-1, 1, -1}));
  CHECK(s.code() == 0b101);
  CHECK(s.flipped() == spins({1, -1, 1}));
  CHECK(s.with_flip(1) == spins({-1, -1, -1}));
}

TEST_CASE("signed adjacency") {
  const auto j = triangle();
  const auto a = signed_adjacency(j, spins({1, 1, -1}));
  CHECK(a(0, 1) == -1.0);
  CHECK(a(0, 2) == 1.0);
  CHECK(a(1, 2) == 1.0);
  CHECK(a(0, 0) == 0.0);
  CHECK(signed_adjacency(j, SpinConfiguration::all_up(3)).matrix() == j.weights());

  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto jj = random_couplings(7, rng, 0.6);
    const auto sigma = random_spins(7, rng);
    CHECK(signed_adjacency(jj, sigma).matrix() == signed_adjacency(jj, sigma.flipped()).matrix());
  }
}

TEST_CASE("signed laplacian of the triangle") {
  const auto j = triangle();
  const auto l = signed_laplacian(signed_adjacency(j, spins({1, 1, -1})));
  const double expected[3][3] = {{0, 1, -1}, {1, 0, -1}, {-1, -1, 2}};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(l(r, c) == expected[r][c]);
  const auto ev = symmetric_eigenvalues(l.matrix());
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(ev[1]) < 1e-12);
  CHECK(ev[2] == doctest::Approx(3.0).epsilon(1e-12));

  const auto l_up = signed_laplacian(signed_adjacency(j, SpinConfiguration::all_up(3)));
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(l_up(r, c) == (r == c ? -2.0 : 1.0));
  const auto ev_up = symmetric_eigenvalues(l_up.matrix());
  CHECK(ev_up[0] == doctest::Approx(-3.0));
  CHECK(ev_up[1] == doctest::Approx(-3.0));
  CHECK(std::abs(ev_up[2]) < 1e-12);

  const auto empty = signed_laplacian(signed_adjacency(CouplingMatrix::empty(4), SpinConfiguration::all_up(4)));
  CHECK(empty.matrix() == Matrix(4));
}

TEST_CASE("trace identity examples") {
  const auto j = triangle();
  CHECK(hamiltonian_from_trace(signed_laplacian(signed_adjacency(j, spins({1, 1, -1})))) == -1.0);
  CHECK(hamiltonian_from_trace(signed_laplacian(signed_adjacency(j, spins({1, 1, 1})))) == 3.0);
}

TEST_CASE("trace identity and zero row sums on random graphs") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 50;
    const auto j = random_couplings(n, rng, 0.3);
    const auto sigma = random_spins(n, rng);
    const auto l = signed_laplacian(signed_adjacency(j, sigma));
    const double h = hamiltonian(j, sigma);
    CHECK(std::abs(h - hamiltonian_from_trace(l)) <= 1e-12 * std::max(1.0, std::abs(h)));
    for (std::size_t r = 0; r < n; ++r) {
      double row = 0.0, scale = 0.0;
      for (double x : l.matrix().row(r)) {
        row += x;
        scale = std::max(scale, std::abs(x));
      }
      CHECK(std::abs(row) <= 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("hessian examples") {
  const auto j = triangle();
  const auto l = signed_laplacian(signed_adjacency(j, spins({1, 1, -1})));
  CHECK(lambda_min(hessian(l, RegularizationVector::constant(3, 0.1)).matrix()) == doctest::Approx(-0.8));
  CHECK(lambda_min(hessian(l, RegularizationVector::constant(3, 10.0)).matrix()) == doctest::Approx(19.0));
  CHECK(hessian(l, RegularizationVector::constant(3, 0.0)).matrix() == l.matrix());
  CHECK_THROWS_AS(hessian(l, RegularizationVector::constant(2, 1.0)), ArgumentError);
}

TEST_CASE("three routes to the hessian agree") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 12;
    const auto j = random_couplings(n, rng, 0.7);
    const auto sigma = random_spins(n, rng);
    const auto mu = random_mu(n, rng);
    const auto from_l = hessian(signed_laplacian(signed_adjacency(j, sigma)), mu).matrix();
    const auto entrywise = hessian_entrywise(j, sigma, mu).matrix();
    const auto analytic = energy_hessian(j, mu, spin_to_phase(sigma));
    CHECK(max_abs_difference(from_l, entrywise) <= 1e-12);
    CHECK(max_abs_difference(from_l, analytic) <= 1e-12);
  }
}

TEST_CASE("spin-flip symmetry") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 20;
    const auto j = random_couplings(n, rng, 0.5);
    const auto sigma = random_spins(n, rng);
    const auto mu = random_mu(n, rng);
    CHECK(hamiltonian(j, sigma) == hamiltonian(j, sigma.flipped()));
    CHECK(hessian_entrywise(j, sigma, mu).matrix() == hessian_entrywise(j, sigma.flipped(), mu).matrix());
  }
}

TEST_CASE("frustration-free examples") {
  const auto witness = frustration_free_witness(antiferro_pair());
  REQUIRE(witness.has_value());
  CHECK(hamiltonian(antiferro_pair(), *witness) == -1.0);
  CHECK((*witness)[0] == -(*witness)[1]);
  CHECK_FALSE(is_frustration_free(triangle()));
  CHECK(is_frustration_free(CouplingMatrix::empty(5)));
}

TEST_CASE("trees are frustration-free for any signs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> w(-2.0, 2.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 30;
    Matrix m(n);
    for (std::size_t v = 1; v < n; ++v) {
      const std::size_t parent = rng() % v;
      double x = w(rng);
      if (x == 0.0) x = 1.0;
      m(v, parent) = m(parent, v) = x;
    }
    const CouplingMatrix j(std::move(m));
    const auto s = frustration_free_witness(j);
    REQUIRE(s.has_value());
    for (const auto& e : j.edges()) CHECK(e.weight * (*s)[e.i] * (*s)[e.j] > 0.0);
  }
}

TEST_CASE("frustration-freeness matches exhaustive search over all sign patterns up to six nodes") {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    const std::size_t m = pairs.size();

    // Bit e of edge_sign[code] is set where s_a s_b = -1 on pair e.
    std::vector<std::uint32_t> edge_sign(std::size_t{1} << (n - 1));
    for (std::uint32_t code = 0; code < edge_sign.size(); ++code)
      for (std::size_t e = 0; e < m; ++e)
        if ((((code >> pairs[e].first) ^ (code >> pairs[e].second)) & 1u) != 0) edge_sign[code] |= 1u << e;

    std::size_t patterns = 1;
    for (std::size_t e = 0; e < m; ++e) patterns *= 3;
    std::size_t mismatches = 0;
    Matrix w(n);
    for (std::size_t p = 0; p < patterns; ++p) {
      std::uint32_t present = 0, negative = 0;
      std::size_t rest = p;
      for (std::size_t e = 0; e < m; ++e, rest /= 3) {
        const int digit = static_cast<int>(rest % 3);
        const double x = digit == 0 ? 0.0 : (digit == 1 ? 1.0 : -1.0);
        w(pairs[e].first, pairs[e].second) = w(pairs[e].second, pairs[e].first) = x;
        if (digit != 0) present |= 1u << e;
        if (digit == 2) negative |= 1u << e;
      }
      bool exists = false;
      for (std::uint32_t mask : edge_sign)
        if (((mask ^ negative) & present) == 0) {
          exists = true;
          break;
        }
      if (exists != is_frustration_free(CouplingMatrix(w))) ++mismatches;
    }
    CHECK_MESSAGE(mismatches == 0, "n = " << n);
  }
}

TEST_CASE("structural balance") {
  const auto positive = signed_adjacency(triangle(), spins({1, 1, 1}));
  CHECK_FALSE(is_structurally_balanced(positive));  // all three edges negative

  Matrix p(3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) p(i, i) = 0.0;
  const auto part = structural_balance(SignedAdjacency(p));
  REQUIRE(part.has_value());
  CHECK(part->first.size() == 3);
  CHECK(part->second.empty());

  // One negative edge on a triangle cannot be balanced.
  Matrix q = p;
  q(0, 1) = q(1, 0) = -1.0;
  CHECK_FALSE(is_structurally_balanced(SignedAdjacency(q)));
}

TEST_CASE("frustration-free couplings give balanced adjacency for every configuration") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const auto planted = random_spins(n, rng);
    Matrix m(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (rng() % 2) m(a, b) = m(b, a) = planted[a] * planted[b] * (0.5 + (rng() % 100) / 100.0);
    const CouplingMatrix j(std::move(m));
    REQUIRE(is_frustration_free(j));
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      const auto a = signed_adjacency(j, SpinConfiguration::from_code(code, n));
      const auto part = structural_balance(a);
      REQUIRE(part.has_value());
      CHECK(part->first.size() + part->second.size() == n);
      // Positive inside, negative across.
      std::vector<int> side(n, 0);
      for (auto v : part->second) side[v] = 1;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
          if (a(x, y) != 0.0) CHECK((a(x, y) > 0.0) == (side[x] == side[y]));
    }
    // The satisfying configuration gives a PSD Laplacian.
    const auto l = signed_laplacian(signed_adjacency(j, *frustration_free_witness(j)));
    CHECK(lambda_min(l.matrix()) >= -1e-10);
    CHECK(negative_edge_count(signed_adjacency(j, *frustration_free_witness(j))) == 0);
  }
}

TEST_CASE("negative edge count") {
  CHECK(negative_edge_count(signed_adjacency(triangle(), spins({1, 1, 1}))) == 3);
  CHECK(negative_edge_count(signed_adjacency(triangle(), spins({1, 1, -1}))) == 1);
}

}  // TEST_SUITE
