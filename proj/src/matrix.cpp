#include "oim/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "oim/errors.hpp"

namespace oim {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

double Matrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::is_symmetric(double tol) const noexcept {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw ArgumentError("Matrix::multiply: dimension mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

template <class Op>
Matrix elementwise(const Matrix& a, const Matrix& b, Op op) {
  if (a.size() != b.size()) throw ArgumentError("matrix dimension mismatch");
  Matrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = op(a(i, j), b(i, j));
  return out;
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, [](double x, double y) { return x + y; });
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, [](double x, double y) { return x - y; });
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out(i, j) = s * a(i, j);
  return out;
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
  if (a.size() != b.size()) throw ArgumentError("matrix dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace oim
