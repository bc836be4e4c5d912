#pragma once

#include <cstddef>
#include <vector>

namespace romstab {

using Vector = std::vector<double>;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Vector apply(const Vector& x) const;           // A x
  Vector apply_transposed(const Vector& x) const;  // A* x
  Matrix multiply(const Matrix& other) const;    // A B
  Matrix transposed() const;
  Matrix symmetric_part() const;                 // (A + A*)/2
  double frobenius_norm() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense rank-3 tensor T(i,j,k). apply(a,b) contracts the last two indices:
/// out_i = sum_jk T(i,j,k) a_j b_k.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t n1, std::size_t n2, std::size_t n3, double fill = 0.0)
      : n1_(n1), n2_(n2), n3_(n3), data_(n1 * n2 * n3, fill) {}

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * n2_ + j) * n3_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n2_ + j) * n3_ + k];
  }

  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }
  std::size_t dim3() const { return n3_; }
  bool empty() const { return data_.empty(); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Vector apply(const Vector& a, const Vector& b) const;
  double frobenius_norm() const;

 private:
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::size_t n3_ = 0;
  std::vector<double> data_;
};

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // matching columns, Euclidean-orthonormal
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Sweeps run until the off-diagonal Frobenius norm drops below
/// 1e-13 * ||K||_F. Eigenpairs are sorted by descending eigenvalue and each
/// eigenvector is sign-fixed so its largest-magnitude component is positive
/// (first such component on ties). Throws std::invalid_argument if K is not
/// symmetric within 1e-12 (relative to the largest entry).
SymEig eig_sym(const Matrix& k);

// Small vector helpers used throughout; Euclidean unless weighted.
double dot(const Vector& a, const Vector& b);
double weighted_dot(const Vector& w, const Vector& a, const Vector& b);
double norm(const Vector& a);
double weighted_norm(const Vector& w, const Vector& a);
bool all_finite(const Vector& a);
Vector scaled(const Vector& a, double factor);
Vector sum(const Vector& a, const Vector& b);
Vector difference(const Vector& a, const Vector& b);
void add_scaled(Vector& target, const Vector& a, double factor);  // target += factor * a

}  // namespace romstab
