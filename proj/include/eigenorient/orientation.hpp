#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eigenorient/matrix.hpp"

namespace eigenorient {

enum class Method { arcsin, arctan2 };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

/// Relative threshold below which a column entry counts as a structural zero
/// for the sparse solve rules (scaled by the column norm).
inline constexpr double kStructuralZeroTol = 1e-13;
/// Orthonormality tolerance required of declared eigensystems.
inline constexpr double kEigenSystemOrthoTol = 1e-8;

/// Orthonormal eigenvector matrix plus its eigenvalues, one snapshot.
struct EigenSystem {
  Matrix basis;                    // N x N, columns are eigenvectors
  std::vector<double> eigenvalues; // length N, unsorted
};

/// Strictly-upper-triangular matrix of embedded plane-rotation angles.
/// Entry (k, j), k < j, is the rotation in plane (k, j) belonging to
/// subspace k; row k holds the N-1-k angles of that subspace, the first
/// of which may be major (arctan2 method) while the rest are minor.
class AngleMatrix {
 public:
  AngleMatrix() = default;
  explicit AngleMatrix(int dim);

  int dim() const noexcept { return dim_; }
  int count() const noexcept { return static_cast<int>(theta_.size()); }

  double operator()(int k, int j) const { return theta_[index(k, j)]; }
  double& operator()(int k, int j) { return theta_[index(k, j)]; }

  std::span<const double> row(int k) const;
  void set_row(int k, std::span<const double> angles);

  /// Dense N x N view, zeros on and below the diagonal.
  Matrix dense() const;
  /// Reads the upper triangle of a dense square matrix.
  static AngleMatrix from_dense(const Matrix& m);

 private:
  size_t index(int k, int j) const;
  int dim_ = 0;
  std::vector<double> theta_;  // packed rows k = 0..dim-2
};

/// Diagonal of the reflection matrix S: one +-1 per mode.
struct ReflectionVec {
  std::vector<double> signs;
};

void validate_reflections(const ReflectionVec& s);

struct OrientationResult {
  Matrix oriented_basis;                 // V * diag(S), a pure rotation
  std::vector<double> sorted_eigenvalues;
  AngleMatrix angles;
  ReflectionVec reflections;
  std::vector<int> sort_indices;         // original index of each sorted column
  Method method = Method::arctan2;
};

struct OrientOptions {
  Method method = Method::arctan2;
  bool orient_to_first_orthant = false;
  double ortho_tol = kEigenSystemOrthoTol;  // <= 0 skips the input check
  double zero_tol = kStructuralZeroTol;
};

/// Columns permuted so |eigenvalue| is non-increasing; ties keep their
/// original order. Returns the permutation for caller bookkeeping.
std::pair<EigenSystem, std::vector<int>> sort_eigenvectors(const EigenSystem& sys);

/// Angles that rotate `col` onto the pivot axis, solved pairwise from the
/// bottom up with arcsine ratios. All results are minor. The pivot entry
/// must be nonnegative (any reflection is the caller's job). Returns one
/// angle per plane (pivot, j), j = pivot+1..N-1.
std::vector<double> solve_angles_arcsin(std::span<const double> col, int pivot,
                                        double zero_tol = kStructuralZeroTol);

/// Angles that rotate `col` onto the pivot axis. The first angle is
/// arctan2(col[pivot+1], col[pivot]) in (-pi, pi]; later angles are minor
/// and chain through |sin| of the previously consumed angle. Structural
/// zeros are skipped with a back-reference to the last nonzero entry, and
/// when everything between the pivot and the current entry is zero the
/// sine factor drops out entirely.
std::vector<double> solve_angles_arctan2(std::span<const double> col, int pivot,
                                         double zero_tol = kStructuralZeroTol);

struct ReductionStep {
  Matrix work;                 // cascade^T applied; (pivot, pivot) is now 1
  std::vector<double> angles;  // the subspace row of the angle matrix
  double sign;                 // -1 iff the arcsin path reflected the column
};

/// One subspace visit: optionally reflect the pivot column (arcsin only),
/// solve its angles, and rotate the whole working matrix so the pivot
/// column lands on the pivot axis.
ReductionStep reduce_dimension_by_one(const Matrix& work, int pivot, Method method,
                                      double zero_tol = kStructuralZeroTol);

OrientationResult orient_eigenvectors(const EigenSystem& sys, Method method,
                                      bool orient_to_first_orthant = false);
OrientationResult orient_eigenvectors(const EigenSystem& sys, const OrientOptions& options);

/// Rebuild the oriented basis from its embedded angles:
/// V = R_1 R_2 ... R_{N-1}, one cascade per subspace row. The result is a
/// pure rotation (det +1); the reflections argument is validated for the
/// callers that carry it alongside the angles but does not enter the
/// product, since the oriented basis already absorbed S.
Matrix generate_oriented_eigenvectors(const AngleMatrix& angles);
Matrix generate_oriented_eigenvectors(const AngleMatrix& angles, const ReflectionVec& reflections);

/// Column-wise V * diag(S): recovers the sorted input basis from an
/// orientation result (S is an involution).
Matrix apply_reflections(const Matrix& basis, const ReflectionVec& reflections);

struct UntwistResult {
  ReflectionVec s_tan;            // at most one -1, in the last slot
  std::vector<bool> major_flags;  // subspaces whose reflection became a major rotation
};

/// Trades arcsin-style scattered reflections for major-angle rotations:
/// a -1 at position k flips entries k and k+1 and flags subspace k.
/// Bookkeeping only; the sign product (parity) is preserved.
UntwistResult untwist_reflections(const ReflectionVec& s_sin);

}  // namespace eigenorient
