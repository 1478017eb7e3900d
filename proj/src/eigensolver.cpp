#include "eigenorient/eigensolver.hpp"

#include <cmath>
#include <stdexcept>

#include "eigenorient/errors.hpp"

namespace eigenorient {

namespace {

constexpr int kMaxSweeps = 50;
constexpr double kSymmetryTol = 1e-10;
constexpr double kConvergenceFactor = 1e-12;

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) sum += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double x : a.data()) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("symmetric_eigen: matrix must be square");
  const int n = m.rows();
  const double scale = std::max(1.0, m.max_abs());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * scale) {
        throw std::invalid_argument("symmetric_eigen: matrix is not symmetric");
      }
    }
  }

  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const double threshold = kConvergenceFactor * frobenius_norm(a);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      EigenDecomposition result;
      result.eigenvalues.resize(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) result.eigenvalues[static_cast<size_t>(i)] = a(i, i);
      result.eigenvectors = std::move(v);
      return result;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        // Stable rotation choice: smaller root of t^2 + 2*tau*t - 1 = 0.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) <= threshold) {
    EigenDecomposition result;
    result.eigenvalues.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) result.eigenvalues[static_cast<size_t>(i)] = a(i, i);
    result.eigenvectors = std::move(v);
    return result;
  }
  throw NumericError("symmetric_eigen: no convergence within 50 sweeps");
}

}  // namespace eigenorient
