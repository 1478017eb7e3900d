#pragma once

#include <span>
#include <vector>

namespace eigenorient {

/// Dense square-or-rectangular matrix of doubles, row-major storage.
/// Constructors reject non-finite entries; all operations are value
/// semantics and safe to share across threads once built.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> entries);

  static Matrix identity(int n);
  static Matrix diagonal(std::span<const double> d);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const;
  std::vector<double> column(int j) const;
  void set_column(int j, std::span<const double> values);
  void scale_column(int j, double factor);

  double max_abs() const;
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& m, std::span<const double> v);

/// Largest entrywise |a - b|; shapes must match.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Plane rotation by theta acting on axes (axis_i, axis_j), axis_i < axis_j.
struct GivensSpec {
  int dim;
  int axis_i;
  int axis_j;
  double theta;
};

/// N x N identity except (i,i) = (j,j) = cos t, (i,j) = -sin t, (j,i) = +sin t.
/// Proper rotation: det = +1.
Matrix make_givens(const GivensSpec& spec);

/// Product R_{p,p+1} R_{p,p+2} ... R_{p,N-1} for pivot p. `angles` holds
/// the rotation for plane (p, j), j = p+1..N-1, in that order.
Matrix compose_cascade(int dim, int pivot, std::span<const double> angles);

/// m <- G(i,j,theta) * m, applied as a two-row update.
void apply_givens_left(Matrix& m, int i, int j, double theta);
/// m <- G(i,j,theta)^T * m.
void apply_givens_left_transposed(Matrix& m, int i, int j, double theta);

/// Determinant via LU with partial pivoting. Never snapped to +-1.
double det(const Matrix& m);

/// True iff max |m^T m - I| <= tol.
bool is_orthonormal(const Matrix& m, double tol);

}  // namespace eigenorient
