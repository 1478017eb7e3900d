#include "eigenorient/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace eigenorient {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require(rows >= 0 && cols >= 0, "Matrix: negative dimensions");
  data_.assign(static_cast<size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(rows >= 0 && cols >= 0, "Matrix: negative dimensions");
  require(data_.size() == static_cast<size_t>(rows) * cols,
          "Matrix: entry count does not match dimensions");
  for (double x : data_) {
    require(std::isfinite(x), "Matrix: non-finite entry");
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) {
    require(std::isfinite(d[i]), "Matrix::diagonal: non-finite entry");
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<double> Matrix::column(int j) const {
  require(j >= 0 && j < cols_, "Matrix::column: index out of range");
  std::vector<double> c(static_cast<size_t>(rows_));
  for (int i = 0; i < rows_; ++i) c[static_cast<size_t>(i)] = (*this)(i, j);
  return c;
}

void Matrix::set_column(int j, std::span<const double> values) {
  require(j >= 0 && j < cols_, "Matrix::set_column: index out of range");
  require(static_cast<int>(values.size()) == rows_, "Matrix::set_column: size mismatch");
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = values[static_cast<size_t>(i)];
}

void Matrix::scale_column(int j, double factor) {
  require(j >= 0 && j < cols_, "Matrix::scale_column: index out of range");
  for (int i = 0; i < rows_; ++i) (*this)(i, j) *= factor;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix multiply: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Matrix add: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Matrix subtract: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

std::vector<double> operator*(const Matrix& m, std::span<const double> v) {
  if (m.cols() != static_cast<int>(v.size()))
    throw std::invalid_argument("Matrix-vector multiply: shape mismatch");
  std::vector<double> out(static_cast<size_t>(m.rows()), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < m.cols(); ++j) acc += m(i, j) * v[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

Matrix make_givens(const GivensSpec& spec) {
  require(spec.dim >= 2, "make_givens: dim must be at least 2");
  require(0 <= spec.axis_i && spec.axis_i < spec.axis_j && spec.axis_j < spec.dim,
          "make_givens: axis indices out of range");
  require(std::isfinite(spec.theta), "make_givens: non-finite angle");
  Matrix r = Matrix::identity(spec.dim);
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  r(spec.axis_i, spec.axis_i) = c;
  r(spec.axis_j, spec.axis_j) = c;
  r(spec.axis_i, spec.axis_j) = -s;
  r(spec.axis_j, spec.axis_i) = s;
  return r;
}

Matrix compose_cascade(int dim, int pivot, std::span<const double> angles) {
  require(dim >= 1, "compose_cascade: dim must be positive");
  require(0 <= pivot && pivot < dim, "compose_cascade: pivot out of range");
  require(static_cast<int>(angles.size()) == dim - 1 - pivot,
          "compose_cascade: expected one angle per plane (pivot, j), j = pivot+1..dim-1");
  Matrix r = Matrix::identity(dim);
  // Accumulate R_{p,j} * r for j descending, so the product reads
  // R_{p,p+1} R_{p,p+2} ... R_{p,dim-1}.
  for (int j = dim - 1; j >= pivot + 1; --j) {
    apply_givens_left(r, pivot, j, angles[static_cast<size_t>(j - pivot - 1)]);
  }
  return r;
}

void apply_givens_left(Matrix& m, int i, int j, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int k = 0; k < m.cols(); ++k) {
    const double mi = m(i, k);
    const double mj = m(j, k);
    m(i, k) = c * mi - s * mj;
    m(j, k) = s * mi + c * mj;
  }
}

void apply_givens_left_transposed(Matrix& m, int i, int j, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (int k = 0; k < m.cols(); ++k) {
    const double mi = m(i, k);
    const double mj = m(j, k);
    m(i, k) = c * mi + s * mj;
    m(j, k) = -s * mi + c * mj;
  }
}

double det(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("det: matrix must be square");
  const int n = m.rows();
  if (n == 0) return 1.0;
  Matrix lu = m;
  double sign = 1.0;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::abs(lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        pivot = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  double d = sign;
  for (int k = 0; k < n; ++k) d *= lu(k, k);
  return d;
}

bool is_orthonormal(const Matrix& m, double tol) {
  if (!m.square()) throw std::invalid_argument("is_orthonormal: matrix must be square");
  const int n = m.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += m(k, i) * m(k, j);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(dot - target) > tol) return false;
    }
  }
  return true;
}

}  // namespace eigenorient
