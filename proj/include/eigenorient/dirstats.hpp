#pragma once

#include <span>
#include <vector>

#include "eigenorient/matrix.hpp"
#include "eigenorient/orientation.hpp"

namespace eigenorient {

/// Time-indexed sequence of orientation results sharing one dimension and
/// method, with strictly increasing timestamps.
struct EigenSeries {
  std::vector<OrientationResult> snapshots;
  std::vector<double> timestamps;

  int dim() const;
  Method method() const;
  void validate() const;
};

/// Causal FIR weights h[n]; all positive. The normalized flag asserts the
/// weights sum to one.
struct FilterKernel {
  std::vector<double> weights;
  bool normalized = false;

  static FilterKernel from_weights(std::vector<double> w);
  FilterKernel normalized_copy() const;
  /// Weighted mean lag, in samples: sum(k * h[k]) / sum(h[k]).
  double mean_lag() const;
  void validate() const;
};

/// Output of dynamic stabilization: one orthonormal basis per fully
/// covered window (valid-mode convolution, length = input - kernel + 1).
struct StabilizedSeries {
  std::vector<Matrix> bases;                    // each in SO(N)
  std::vector<AngleMatrix> angle_matrices;      // embedded angles of each basis
  std::vector<std::vector<double>> eigenvalues; // filtered, descending
  std::vector<double> timestamps;               // label of the newest sample per window
  double delay = 0.0;                           // samples
};

/// Inverse participation ratio sum(v_i^4) of a unit vector.
double ipr(std::span<const double> v);
/// 1 / (N * IPR); 1/N for a one-hot vector, 1 when all entries share mass.
double participation_score(std::span<const double> v);

/// Normalized weighted resultant of unit vectors sharing a dimension.
/// Throws NumericError if the resultant norm falls below 1e-12.
std::vector<double> average_direction(const std::vector<std::vector<double>>& vectors,
                                      std::span<const double> weights);

/// Dispersion of a set of angles: 1 - |mean resultant|, in [0, 1].
double circular_variance(std::span<const double> angles);

/// Convolves the oriented bases with the kernel column by column,
/// renormalizes each column, and restores orthonormality by re-running the
/// orientation machinery on the blended matrix (filtered eigenvalue
/// magnitudes supply the sort order). The regenerated bases are exact
/// rotations; their embedded angles come back as well.
StabilizedSeries filter_eigenbases(const EigenSeries& series, const FilterKernel& kernel,
                                   Method reorient_method = Method::arctan2);

/// Per-index convolution of the eigenvalue sequences with the normalized
/// kernel. Positive weights preserve the rank order.
std::vector<std::vector<double>> filter_eigenvalues(const EigenSeries& series,
                                                    const FilterKernel& kernel);

/// Zeroes the angle rows of every mode past the first `informative_count`:
/// the noise modes are pinned while the informative structure is retained.
AngleMatrix static_stabilize(const AngleMatrix& angles, int informative_count);

/// Orients a list of raw snapshots into a series (convenience for the
/// pipelines; snapshots must share a dimension).
EigenSeries orient_series(const std::vector<EigenSystem>& snapshots,
                          std::span<const double> timestamps, const OrientOptions& options);

}  // namespace eigenorient
