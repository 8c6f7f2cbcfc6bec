#include "oim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oim/errors.hpp"

namespace oim {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Row-cyclic Jacobi sweeps on a working copy. When `v` is non-null the
// rotations are accumulated into it (columns are eigenvectors).
std::vector<double> jacobi(Matrix a, Matrix* v, const JacobiOptions& opts) {
  const std::size_t n = a.size();
  if (n == 0) throw ArgumentError("eigensolver: empty matrix");
  if (!a.all_finite()) throw ArgumentError("eigensolver: non-finite entry");
  if (!a.is_symmetric(kSymmetryTolerance)) throw ArgumentError("eigensolver: matrix is not symmetric");
  // Symmetrize exactly so rotations only ever touch the upper triangle consistently.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  if (v) *v = Matrix::identity(n);

  const double threshold = opts.relative_tolerance * a.frobenius_norm();
  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (++sweep > opts.max_sweeps) throw NumericalError("eigensolver: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Rotation angle from cot(2 phi) = (aqq - app) / (2 apq), smaller root.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          if (arp == 0.0 && arq == 0.0) continue;
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a(r, p) = a(p, r) = new_rp;
          a(r, q) = a(q, r) = new_rq;
        }
        if (v) {
          Matrix& vm = *v;
          for (std::size_t r = 0; r < n; ++r) {
            const double vrp = vm(r, p);
            const double vrq = vm(r, q);
            vm(r, p) = vrp - s * (vrq + tau * vrp);
            vm(r, q) = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  return eig;
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& m, const JacobiOptions& opts) {
  Matrix v;
  std::vector<double> raw = jacobi(m, &v, opts);
  const std::size_t n = raw.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return raw[x] < raw[y]; });
  EigenDecomposition out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = raw[order[k]];
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix& m, const JacobiOptions& opts) {
  std::vector<double> eig = jacobi(m, nullptr, opts);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::vector<double> blockwise_eigenvalues(const Matrix& m, const JacobiOptions& opts) {
  const std::size_t n = m.size();
  if (n == 0) throw ArgumentError("eigensolver: empty matrix");
  if (!m.is_symmetric(kSymmetryTolerance)) throw ArgumentError("eigensolver: matrix is not symmetric");
  std::vector<int> component(n, -1);
  std::vector<std::size_t> members;
  std::vector<double> eig;
  eig.reserve(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (component[root] >= 0) continue;
    members.assign(1, root);
    component[root] = static_cast<int>(root);
    for (std::size_t head = 0; head < members.size(); ++head) {
      const std::size_t u = members[head];
      for (std::size_t v = 0; v < n; ++v)
        if (component[v] < 0 && (m(u, v) != 0.0 || m(v, u) != 0.0)) {
          component[v] = static_cast<int>(root);
          members.push_back(v);
        }
    }
    if (members.size() == 1) {
      eig.push_back(m(root, root));
      continue;
    }
    Matrix block(members.size());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b) block(a, b) = m(members[a], members[b]);
    const std::vector<double> part = jacobi(std::move(block), nullptr, opts);
    eig.insert(eig.end(), part.begin(), part.end());
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

Spectrum eigenvalues_symmetric(const Matrix& m) {
  EigenDecomposition d = symmetric_eigen(m);
  const std::size_t n = m.size();
  double worst = 0.0;
  std::vector<double> vec(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) vec[r] = d.eigenvectors(r, k);
    const std::vector<double> mv = m.multiply(vec);
    double res = 0.0;
    for (std::size_t r = 0; r < n; ++r) res = std::max(res, std::abs(mv[r] - d.eigenvalues[k] * vec[r]));
    worst = std::max(worst, res / std::max(1.0, std::abs(d.eigenvalues[k])));
  }
  if (worst > 1e-8) throw NumericalError("eigensolver: residual bound exceeds 1e-8");
  return {std::move(d.eigenvalues), worst};
}

double lambda_min(const Matrix& m) { return symmetric_eigenvalues(m).front(); }

StabilityVerdict classify_stability(double lmin, double tol) {
  if (lmin > tol) return {Stability::Stable, lmin};
  if (lmin < -tol) return {Stability::Unstable, lmin};
  return {Stability::Marginal, lmin};
}

StabilityVerdict classify_stability(const HessianMatrix& h, double tol) {
  return classify_stability(lambda_min(h.matrix()), tol);
}

const char* to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "unknown";
}

}  // namespace oim
