#include "romstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace romstab {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::apply(const Vector& x) const {
  if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    const double* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
  return out;
}

Vector Matrix::apply_transposed(const Vector& x) const {
  if (x.size() != rows_) throw std::invalid_argument("Matrix::apply_transposed: size mismatch");
  Vector out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = data_.data() + i * cols_;
    const double xi = x[i];
    for (std::size_t j = 0; j < cols_; ++j) out[j] += row[j] * xi;
  }
  return out;
}

Matrix Matrix::multiply(const Matrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("Matrix::multiply: size mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += aik * other(k, j);
    }
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::symmetric_part() const {
  if (rows_ != cols_) throw std::invalid_argument("symmetric_part: matrix not square");
  Matrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
  return out;
}

double Matrix::frobenius_norm() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return std::sqrt(acc);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Vector Tensor3::apply(const Vector& a, const Vector& b) const {
  if (a.size() != n2_ || b.size() != n3_)
    throw std::invalid_argument("Tensor3::apply: size mismatch");
  Vector out(n1_, 0.0);
  for (std::size_t i = 0; i < n1_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n2_; ++j) {
      const double aj = a[j];
      if (aj == 0.0) continue;
      const double* slice = data_.data() + (i * n2_ + j) * n3_;
      double inner = 0.0;
      for (std::size_t k = 0; k < n3_; ++k) inner += slice[k] * b[k];
      acc += aj * inner;
    }
    out[i] = acc;
  }
  return out;
}

double Tensor3::frobenius_norm() const {
  double acc = 0.0;
  for (double v : data_) acc += v * v;
  return std::sqrt(acc);
}

namespace {

double offdiag_norm(const Matrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

}  // namespace

SymEig eig_sym(const Matrix& k) {
  const std::size_t n = k.rows();
  if (n == 0 || k.cols() != n) throw std::invalid_argument("eig_sym: matrix not square");

  const double scale = std::max(1.0, k.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(k(i, j) - k(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("eig_sym: matrix not symmetric");

  Matrix a = k.symmetric_part();
  Matrix v = Matrix::identity(n);
  const double norm_f = a.frobenius_norm();
  const double threshold = 1e-13 * norm_f;

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (offdiag_norm(a) <= threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- J* A J, V <- V J with J the (p,q) plane rotation.
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && offdiag_norm(a) > threshold)
    throw std::runtime_error("eig_sym: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = a(src, src);
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, col) = sign * v(i, src);
  }
  return out;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double weighted_dot(const Vector& w, const Vector& a, const Vector& b) {
  if (a.size() != b.size() || w.size() != a.size())
    throw std::invalid_argument("weighted_dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double weighted_norm(const Vector& w, const Vector& a) {
  return std::sqrt(weighted_dot(w, a, a));
}

bool all_finite(const Vector& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

Vector scaled(const Vector& a, double factor) {
  Vector out(a);
  for (double& v : out) v *= factor;
  return out;
}

Vector sum(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sum: size mismatch");
  Vector out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Vector difference(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("difference: size mismatch");
  Vector out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  return out;
}

void add_scaled(Vector& target, const Vector& a, double factor) {
  if (target.size() != a.size()) throw std::invalid_argument("add_scaled: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) target[i] += factor * a[i];
}

}  // namespace romstab
