#pragma once

#include <vector>

#include "eigenorient/matrix.hpp"

namespace eigenorient {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // unordered; callers sort as needed
  Matrix eigenvectors;              // columns, orthonormal
};

/// Cyclic-Jacobi eigendecomposition of a symmetric matrix.
/// Input must be symmetric within 1e-10 (relative to max entry) and finite.
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-12 * ||m||_F; throws NumericError after 50 sweeps without convergence.
EigenDecomposition symmetric_eigen(const Matrix& m);

}  // namespace eigenorient
