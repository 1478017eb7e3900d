#include "eigenorient/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "eigenorient/errors.hpp"

namespace eigenorient {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnitNormTol = 1e-10;
constexpr double kArcsinDegenerateTol = 1e-14;

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

/// Angles for the subspace column `sub` (sub[0] is the pivot entry),
/// solved pairwise from the bottom up. Expects a unit vector with a
/// nonnegative leading entry. The cumulative cosine product for entry j
/// equals the prefix norm sqrt(sum_{m<=j} a_m^2) of a unit column, and is
/// evaluated that way: the sequential product loses the entry when asin
/// saturates near +-pi/2 (an exactly zero pivot entry already gets there).
std::vector<double> arcsin_impl(std::span<const double> sub, double zero_tol) {
  const int n = static_cast<int>(sub.size());
  std::vector<double> angles(static_cast<size_t>(n - 1), 0.0);
  std::vector<double> prefix_norm(static_cast<size_t>(n));
  double mass = 0.0;
  for (int j = 0; j < n; ++j) {
    mass += sub[static_cast<size_t>(j)] * sub[static_cast<size_t>(j)];
    prefix_norm[static_cast<size_t>(j)] = std::sqrt(mass);
  }
  for (int j = n - 1; j >= 1; --j) {
    const double numerator = sub[static_cast<size_t>(j)];
    const double cos_product = prefix_norm[static_cast<size_t>(j)];
    double theta = 0.0;
    if (cos_product < kArcsinDegenerateTol) {
      if (std::abs(numerator) > zero_tol) {
        throw NumericError(
            "solve_angles_arcsin: vanishing cosine product against a nonzero entry");
      }
      // Structural zero over a collapsed product: the rotation is absent.
    } else {
      theta = std::asin(clamp_unit(numerator / cos_product));
    }
    angles[static_cast<size_t>(j - 1)] = theta;
  }
  return angles;
}

/// Modified-arctan2 angles for the subspace column `sub`. Only the first
/// angle sees the signed pivot entry and may be major; every later angle
/// is anchored to the absolute value of the last nonzero entry consumed,
/// which keeps it minor and keeps a signed zero out of the x argument.
std::vector<double> arctan2_impl(std::span<const double> sub, double zero_tol) {
  const int n = static_cast<int>(sub.size());
  std::vector<double> angles(static_cast<size_t>(n - 1), 0.0);
  int prev = 0;        // index of the last nonzero entry consumed
  int prev_slot = -1;  // its angle slot; -1 means the pivot entry itself
  for (int k = 1; k < n; ++k) {
    const double ak = sub[static_cast<size_t>(k)];
    if (std::abs(ak) <= zero_tol) {
      if (k == 1 && sub[0] < -zero_tol) {
        // The hemisphere of a negative pivot entry is still the first
        // angle's to record: arctan2(0, x<0) = pi.
        angles[0] = kPi;
      }
      continue;
    }
    double theta;
    if (k == 1) {
      theta = std::atan2(ak, sub[0]);
      if (theta == -kPi) theta = kPi;  // canonical branch: (-pi, pi]
    } else if (prev == 0) {
      // Everything between the pivot and a_k was zero, so the sine factor
      // is absent; the pivot's sign was consumed by the first angle.
      theta = std::atan2(ak, std::abs(sub[0]));
    } else {
      theta = std::atan2(ak * std::abs(std::sin(angles[static_cast<size_t>(prev_slot)])),
                         std::abs(sub[static_cast<size_t>(prev)]));
    }
    angles[static_cast<size_t>(k - 1)] = theta;
    prev = k;
    prev_slot = k - 1;
  }
  return angles;
}

std::vector<double> solve_impl(Method method, std::span<const double> sub, double zero_tol) {
  return method == Method::arcsin ? arcsin_impl(sub, zero_tol) : arctan2_impl(sub, zero_tol);
}

void validate_solver_input(std::span<const double> col, int pivot) {
  const int n = static_cast<int>(col.size());
  require(n >= 2, "angle solver: column must have at least two entries");
  require(0 <= pivot && pivot < n - 1, "angle solver: pivot out of range");
  const double norm = l2_norm(col);
  require(std::abs(norm - 1.0) <= kUnitNormTol, "angle solver: column is not a unit vector");
}

OrientationResult orient_matrix(const EigenSystem& sys, const OrientOptions& options) {
  const int n = sys.basis.rows();
  auto [sorted, perm] = sort_eigenvectors(sys);

  Matrix work = sorted.basis;
  std::vector<double> signs(static_cast<size_t>(n), 1.0);
  AngleMatrix angles(n);

  if (options.orient_to_first_orthant) {
    const double s0 = (work(0, 0) >= 0.0) ? 1.0 : -1.0;
    if (s0 < 0.0) work.scale_column(0, -1.0);
    signs[0] = s0;
  }

  for (int i = 0; i <= n - 2; ++i) {
    ReductionStep step = reduce_dimension_by_one(work, i, options.method, options.zero_tol);
    work = std::move(step.work);
    angles.set_row(i, step.angles);
    signs[static_cast<size_t>(i)] *= step.sign;
  }
  signs[static_cast<size_t>(n - 1)] *= (work(n - 1, n - 1) >= 0.0) ? 1.0 : -1.0;

  OrientationResult result;
  result.oriented_basis = apply_reflections(sorted.basis, ReflectionVec{signs});
  result.sorted_eigenvalues = std::move(sorted.eigenvalues);
  result.angles = std::move(angles);
  result.reflections = ReflectionVec{std::move(signs)};
  result.sort_indices = std::move(perm);
  result.method = options.method;
  return result;
}

}  // namespace

const char* method_name(Method m) {
  return m == Method::arcsin ? "arcsin" : "arctan2";
}

Method method_from_name(const std::string& name) {
  if (name == "arcsin") return Method::arcsin;
  if (name == "arctan2") return Method::arctan2;
  throw std::invalid_argument("unknown method: " + name);
}

AngleMatrix::AngleMatrix(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("AngleMatrix: dim must be positive");
  theta_.assign(static_cast<size_t>(dim) * (dim - 1) / 2, 0.0);
}

size_t AngleMatrix::index(int k, int j) const {
  if (!(0 <= k && k < j && j < dim_))
    throw std::invalid_argument("AngleMatrix: index outside the strict upper triangle");
  const size_t row_offset = static_cast<size_t>(k) * (dim_ - 1) - static_cast<size_t>(k) * (k - 1) / 2;
  return row_offset + static_cast<size_t>(j - k - 1);
}

std::span<const double> AngleMatrix::row(int k) const {
  if (!(0 <= k && k < dim_ - 1))
    throw std::invalid_argument("AngleMatrix::row: subspace index out of range");
  const size_t row_offset = static_cast<size_t>(k) * (dim_ - 1) - static_cast<size_t>(k) * (k - 1) / 2;
  return std::span<const double>(theta_).subspan(row_offset, static_cast<size_t>(dim_ - 1 - k));
}

void AngleMatrix::set_row(int k, std::span<const double> angles) {
  if (!(0 <= k && k < dim_ - 1))
    throw std::invalid_argument("AngleMatrix::set_row: subspace index out of range");
  if (static_cast<int>(angles.size()) != dim_ - 1 - k)
    throw std::invalid_argument("AngleMatrix::set_row: wrong row length");
  const size_t row_offset = static_cast<size_t>(k) * (dim_ - 1) - static_cast<size_t>(k) * (k - 1) / 2;
  std::copy(angles.begin(), angles.end(), theta_.begin() + static_cast<long>(row_offset));
}

Matrix AngleMatrix::dense() const {
  Matrix m(dim_, dim_);
  for (int k = 0; k < dim_ - 1; ++k)
    for (int j = k + 1; j < dim_; ++j) m(k, j) = (*this)(k, j);
  return m;
}

AngleMatrix AngleMatrix::from_dense(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("AngleMatrix::from_dense: matrix must be square");
  AngleMatrix a(m.rows());
  for (int k = 0; k < m.rows() - 1; ++k)
    for (int j = k + 1; j < m.cols(); ++j) a(k, j) = m(k, j);
  return a;
}

void validate_reflections(const ReflectionVec& s) {
  for (double x : s.signs) {
    if (x != 1.0 && x != -1.0)
      throw std::invalid_argument("ReflectionVec: entries must be +1 or -1");
  }
}

std::pair<EigenSystem, std::vector<int>> sort_eigenvectors(const EigenSystem& sys) {
  const int n = static_cast<int>(sys.eigenvalues.size());
  require(sys.basis.cols() == n, "sort_eigenvectors: eigenvalue count does not match basis");
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(sys.eigenvalues[static_cast<size_t>(a)]) >
           std::abs(sys.eigenvalues[static_cast<size_t>(b)]);
  });

  EigenSystem sorted;
  sorted.basis = Matrix(sys.basis.rows(), sys.basis.cols());
  sorted.eigenvalues.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<size_t>(k)];
    sorted.eigenvalues[static_cast<size_t>(k)] = sys.eigenvalues[static_cast<size_t>(src)];
    for (int i = 0; i < sys.basis.rows(); ++i) sorted.basis(i, k) = sys.basis(i, src);
  }
  return {std::move(sorted), std::move(order)};
}

std::vector<double> solve_angles_arcsin(std::span<const double> col, int pivot, double zero_tol) {
  validate_solver_input(col, pivot);
  require(col[static_cast<size_t>(pivot)] >= -zero_tol,
          "solve_angles_arcsin: pivot entry must be nonnegative");
  return arcsin_impl(col.subspan(static_cast<size_t>(pivot)), zero_tol);
}

std::vector<double> solve_angles_arctan2(std::span<const double> col, int pivot, double zero_tol) {
  validate_solver_input(col, pivot);
  return arctan2_impl(col.subspan(static_cast<size_t>(pivot)), zero_tol);
}

ReductionStep reduce_dimension_by_one(const Matrix& work, int pivot, Method method,
                                      double zero_tol) {
  require(work.square(), "reduce_dimension_by_one: working matrix must be square");
  const int n = work.rows();
  require(0 <= pivot && pivot < n - 1, "reduce_dimension_by_one: pivot out of range");

  ReductionStep step;
  step.work = work;
  step.sign = 1.0;
  if (method == Method::arcsin && step.work(pivot, pivot) < 0.0) {
    step.work.scale_column(pivot, -1.0);
    step.sign = -1.0;
  }

  std::vector<double> sub(static_cast<size_t>(n - pivot));
  for (int i = pivot; i < n; ++i) sub[static_cast<size_t>(i - pivot)] = step.work(i, pivot);
  const double norm = l2_norm(sub);
  if (norm < 1e-12) throw NumericError("reduce_dimension_by_one: degenerate pivot column");
  for (double& x : sub) x /= norm;

  step.angles = solve_impl(method, sub, zero_tol);

  // work <- cascade^T * work; the transposed factors act in ascending plane order.
  for (int j = pivot + 1; j < n; ++j) {
    apply_givens_left_transposed(step.work, pivot, j, step.angles[static_cast<size_t>(j - pivot - 1)]);
  }
  return step;
}

OrientationResult orient_eigenvectors(const EigenSystem& sys, Method method,
                                      bool orient_to_first_orthant) {
  OrientOptions options;
  options.method = method;
  options.orient_to_first_orthant = orient_to_first_orthant;
  return orient_eigenvectors(sys, options);
}

OrientationResult orient_eigenvectors(const EigenSystem& sys, const OrientOptions& options) {
  require(sys.basis.square(), "orient_eigenvectors: basis must be square");
  const int n = sys.basis.rows();
  require(n >= 1, "orient_eigenvectors: empty basis");
  require(static_cast<int>(sys.eigenvalues.size()) == n,
          "orient_eigenvectors: eigenvalue count does not match basis");
  for (double e : sys.eigenvalues)
    require(std::isfinite(e), "orient_eigenvectors: non-finite eigenvalue");
  if (options.ortho_tol > 0.0 && !is_orthonormal(sys.basis, options.ortho_tol))
    throw std::invalid_argument("orient_eigenvectors: basis is not orthonormal");
  return orient_matrix(sys, options);
}

Matrix generate_oriented_eigenvectors(const AngleMatrix& angles) {
  const int n = angles.dim();
  constexpr double slack = 1e-9;
  for (int k = 0; k < n - 1; ++k) {
    for (int j = k + 1; j < n; ++j) {
      const double theta = angles(k, j);
      require(std::isfinite(theta), "generate_oriented_eigenvectors: non-finite angle");
      const double bound = (j == k + 1) ? kPi : kPi / 2.0;
      require(std::abs(theta) <= bound + slack,
              "generate_oriented_eigenvectors: angle outside its admissible range");
    }
  }
  Matrix v = Matrix::identity(n);
  // v <- R_1 R_2 ... R_{N-1} I, built innermost-first.
  for (int i = n - 2; i >= 0; --i) {
    for (int j = n - 1; j >= i + 1; --j) {
      apply_givens_left(v, i, j, angles(i, j));
    }
  }
  return v;
}

Matrix generate_oriented_eigenvectors(const AngleMatrix& angles, const ReflectionVec& reflections) {
  validate_reflections(reflections);
  require(static_cast<int>(reflections.signs.size()) == angles.dim(),
          "generate_oriented_eigenvectors: reflection vector length mismatch");
  return generate_oriented_eigenvectors(angles);
}

Matrix apply_reflections(const Matrix& basis, const ReflectionVec& reflections) {
  require(basis.cols() == static_cast<int>(reflections.signs.size()),
          "apply_reflections: size mismatch");
  Matrix out = basis;
  for (int j = 0; j < out.cols(); ++j) {
    if (reflections.signs[static_cast<size_t>(j)] < 0.0) out.scale_column(j, -1.0);
  }
  return out;
}

UntwistResult untwist_reflections(const ReflectionVec& s_sin) {
  validate_reflections(s_sin);
  const int n = static_cast<int>(s_sin.signs.size());
  UntwistResult result;
  result.s_tan = s_sin;
  result.major_flags.assign(static_cast<size_t>(std::max(0, n - 1)), false);
  for (int k = 0; k <= n - 2; ++k) {
    if (result.s_tan.signs[static_cast<size_t>(k)] < 0.0) {
      result.major_flags[static_cast<size_t>(k)] = true;
      result.s_tan.signs[static_cast<size_t>(k)] *= -1.0;
      result.s_tan.signs[static_cast<size_t>(k + 1)] *= -1.0;
    }
  }
  return result;
}

}  // namespace eigenorient
