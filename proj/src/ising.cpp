#include "oim/ising.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "oim/errors.hpp"

namespace oim {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw ArgumentError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
}

// Labels each node +1/-1 so that every edge with positive sign joins equal labels
// and every edge with negative sign joins opposite labels. Zero entries are skipped.
template <class SignedMatrix>
std::optional<std::vector<int>> two_color(const SignedMatrix& m) {
  const std::size_t n = m.size();
  std::vector<int> label(n, 0);
  std::queue<std::size_t> frontier;
  for (std::size_t root = 0; root < n; ++root) {
    if (label[root] != 0) continue;
    label[root] = 1;
    frontier.push(root);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v = 0; v < n; ++v) {
        const double w = m(u, v);
        if (v == u || std::abs(w) < kEdgeEpsilon) continue;
        const int want = w > 0 ? label[u] : -label[u];
        if (label[v] == 0) {
          label[v] = want;
          frontier.push(v);
        } else if (label[v] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return label;
}

}  // namespace

CouplingMatrix::CouplingMatrix(Matrix weights) : weights_(std::move(weights)) {
  const std::size_t n = weights_.size();
  if (n == 0) throw ArgumentError("CouplingMatrix: node count must be positive");
  if (!weights_.all_finite()) throw ArgumentError("CouplingMatrix: non-finite weight");
  for (std::size_t i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) throw ArgumentError("CouplingMatrix: nonzero self-coupling");
    for (std::size_t k = i + 1; k < n; ++k)
      if (weights_(i, k) != weights_(k, i)) throw ArgumentError("CouplingMatrix: asymmetric weights");
  }
}

CouplingMatrix CouplingMatrix::from_edges(std::size_t n, std::span<const Edge> edges) {
  Matrix w(n);
  for (const auto& e : edges) {
    if (e.i >= n || e.j >= n) throw ArgumentError("edge index out of range");
    if (e.i == e.j) throw ArgumentError("self-loop edge");
    if (w(e.i, e.j) != 0.0) throw ArgumentError("duplicate edge");
    w(e.i, e.j) = e.weight;
    w(e.j, e.i) = e.weight;
  }
  return CouplingMatrix(std::move(w));
}

std::vector<Edge> CouplingMatrix::edges() const {
  std::vector<Edge> out;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k < n; ++k)
      if (std::abs(weights_(i, k)) >= kEdgeEpsilon) out.push_back({i, k, weights_(i, k)});
  return out;
}

SpinConfiguration::SpinConfiguration(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_)
    if (s != 1 && s != -1) throw ArgumentError("SpinConfiguration: entries must be -1 or +1");
}

SpinConfiguration SpinConfiguration::from_code(std::uint64_t code, std::size_t n) {
  if (n > 64) throw ArgumentError("SpinConfiguration::from_code: n > 64");
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = ((code >> i) & 1u) ? -1 : 1;
  return SpinConfiguration(std::move(s));
}

SpinConfiguration SpinConfiguration::all_up(std::size_t n) {
  return SpinConfiguration(std::vector<int>(n, 1));
}

std::uint64_t SpinConfiguration::code() const noexcept {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < spins_.size() && i < 64; ++i)
    if (spins_[i] < 0) c |= std::uint64_t{1} << i;
  return c;
}

SpinConfiguration SpinConfiguration::flipped() const {
  SpinConfiguration out = *this;
  for (int& s : out.spins_) s = -s;
  return out;
}

SpinConfiguration SpinConfiguration::with_flip(std::size_t i) const {
  SpinConfiguration out = *this;
  out.spins_.at(i) = -out.spins_[i];
  return out;
}

RegularizationVector::RegularizationVector(std::vector<double> mu) : mu_(std::move(mu)) {
  for (double m : mu_)
    if (!std::isfinite(m) || m < 0.0)
      throw ArgumentError("RegularizationVector: entries must be finite and nonnegative");
}

RegularizationVector RegularizationVector::constant(std::size_t n, double value) {
  return RegularizationVector(std::vector<double>(n, value));
}

double RegularizationVector::max() const noexcept {
  return mu_.empty() ? 0.0 : *std::max_element(mu_.begin(), mu_.end());
}

double RegularizationVector::sum() const noexcept {
  return std::accumulate(mu_.begin(), mu_.end(), 0.0);
}

SignedAdjacency::SignedAdjacency(Matrix entries) : entries_(std::move(entries)) {
  if (!entries_.is_symmetric()) throw ArgumentError("SignedAdjacency: asymmetric");
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_(i, i) != 0.0) throw ArgumentError("SignedAdjacency: nonzero diagonal");
}

double hamiltonian(const CouplingMatrix& j, const SpinConfiguration& sigma) {
  require_same_size(j.size(), sigma.size(), "hamiltonian");
  const std::size_t n = j.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < n; ++k) row += j(i, k) * sigma[k];
    sum += sigma[i] * row;
  }
  return -0.5 * sum;
}

SignedAdjacency signed_adjacency(const CouplingMatrix& j, const SpinConfiguration& sigma) {
  require_same_size(j.size(), sigma.size(), "signed_adjacency");
  const std::size_t n = j.size();
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) a(i, k) = j(i, k) * sigma[i] * sigma[k];
  return SignedAdjacency(std::move(a));
}

SignedLaplacian signed_laplacian(const SignedAdjacency& a) {
  const std::size_t n = a.size();
  Matrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      degree += a(i, k);
      if (k != i) l(i, k) = -a(i, k);
    }
    l(i, i) = degree;
  }
  return SignedLaplacian(std::move(l));
}

double hamiltonian_from_trace(const SignedLaplacian& l) { return -0.5 * l.matrix().trace(); }

HessianMatrix hessian(const SignedLaplacian& l, const RegularizationVector& mu) {
  require_same_size(l.size(), mu.size(), "hessian");
  Matrix h = l.matrix();
  for (std::size_t i = 0; i < h.size(); ++i) h(i, i) += 2.0 * mu[i];
  return HessianMatrix(std::move(h));
}

HessianMatrix hessian_entrywise(const CouplingMatrix& j, const SpinConfiguration& sigma,
                                const RegularizationVector& mu) {
  require_same_size(j.size(), sigma.size(), "hessian_entrywise");
  require_same_size(j.size(), mu.size(), "hessian_entrywise");
  const std::size_t n = j.size();
  Matrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      diag += j(i, k) * sigma[i] * sigma[k];
      if (k != i) h(i, k) = -j(i, k) * sigma[i] * sigma[k];
    }
    h(i, i) = diag + 2.0 * mu[i];
  }
  return HessianMatrix(std::move(h));
}

std::optional<SpinConfiguration> frustration_free_witness(const CouplingMatrix& j) {
  auto labels = two_color(j.weights());
  if (!labels) return std::nullopt;
  return SpinConfiguration(std::move(*labels));
}

bool is_frustration_free(const CouplingMatrix& j) { return frustration_free_witness(j).has_value(); }

std::optional<BalancedPartition> structural_balance(const SignedAdjacency& a) {
  auto labels = two_color(a.matrix());
  if (!labels) return std::nullopt;
  BalancedPartition p;
  for (std::size_t i = 0; i < labels->size(); ++i)
    ((*labels)[i] > 0 ? p.first : p.second).push_back(i);
  return p;
}

bool is_structurally_balanced(const SignedAdjacency& a) { return structural_balance(a).has_value(); }

std::size_t negative_edge_count(const SignedAdjacency& a) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = i + 1; k < a.size(); ++k)
      if (a(i, k) < 0.0 && std::abs(a(i, k)) >= kEdgeEpsilon) ++count;
  return count;
}

}  // namespace oim
