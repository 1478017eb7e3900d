#pragma once

#include <span>
#include <vector>

#include "eigenorient/matrix.hpp"

namespace eigenorient {

/// Statistics of one correlation entry over a series.
struct DispersionEntry {
  int i;
  int j;
  double min;
  double max;
  double mean;
  double stdev;  // unbiased; 0 when only one sample exists
};

struct DispersionReport {
  int dim = 0;
  long samples = 0;
  bool single_sample = false;  // stdev entries are 0 by convention, not data
  std::vector<DispersionEntry> entries;  // upper triangle, i <= j
};

/// basis diag(eigenvalues) basis^T with the diagonal renormalized away:
/// C = diag(1/s) C0 diag(1/s), s_i = sqrt(C0[i,i]). The output diagonal is
/// exactly one. Near-orthonormal (filtered) bases are welcome; the end
/// terms absorb their small diagonal deviations.
Matrix reconstruct_correlation(const Matrix& basis, std::span<const double> eigenvalues);

/// Entrywise min/max/mean/stdev over a series of equally sized matrices.
DispersionReport dispersion_report(const std::vector<Matrix>& series);

/// Sample correlation of a records-by-features panel (columns centered and
/// scaled internally; the diagonal comes out exactly one). Needs more
/// records than features and nonzero column variances.
Matrix sample_correlation(const Matrix& panel);

}  // namespace eigenorient
