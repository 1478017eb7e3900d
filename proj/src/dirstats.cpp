#include "eigenorient/dirstats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eigenorient/errors.hpp"

namespace eigenorient {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void require_unit(std::span<const double> v, const char* who) {
  require(!v.empty(), std::string(who) + ": empty vector");
  const double norm = l2_norm(v);
  require(norm > 0.0, std::string(who) + ": zero vector");
  require(std::abs(norm - 1.0) <= 1e-10, std::string(who) + ": vector is not unit norm");
}

}  // namespace

int EigenSeries::dim() const {
  return snapshots.empty() ? 0 : snapshots.front().oriented_basis.rows();
}

Method EigenSeries::method() const {
  return snapshots.empty() ? Method::arctan2 : snapshots.front().method;
}

void EigenSeries::validate() const {
  require(!snapshots.empty(), "EigenSeries: no snapshots");
  require(snapshots.size() == timestamps.size(),
          "EigenSeries: timestamp count does not match snapshots");
  const int n = dim();
  const Method m = method();
  for (const auto& snap : snapshots) {
    require(snap.oriented_basis.rows() == n && snap.oriented_basis.cols() == n,
            "EigenSeries: snapshots must share one dimension");
    require(snap.method == m, "EigenSeries: snapshots must share one method");
  }
  for (size_t t = 1; t < timestamps.size(); ++t) {
    require(timestamps[t] > timestamps[t - 1], "EigenSeries: timestamps must strictly increase");
  }
}

FilterKernel FilterKernel::from_weights(std::vector<double> w) {
  FilterKernel k;
  k.weights = std::move(w);
  k.normalized = false;
  k.validate();
  return k;
}

FilterKernel FilterKernel::normalized_copy() const {
  validate();
  double sum = 0.0;
  for (double w : weights) sum += w;
  FilterKernel k;
  k.weights.reserve(weights.size());
  for (double w : weights) k.weights.push_back(w / sum);
  k.normalized = true;
  return k;
}

double FilterKernel::mean_lag() const {
  validate();
  double sum = 0.0;
  double lag = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    sum += weights[i];
    lag += static_cast<double>(i) * weights[i];
  }
  return lag / sum;
}

void FilterKernel::validate() const {
  require(!weights.empty(), "FilterKernel: empty weights");
  for (double w : weights) {
    require(std::isfinite(w) && w > 0.0, "FilterKernel: weights must be positive");
  }
  if (normalized) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    require(std::abs(sum - 1.0) <= 1e-12, "FilterKernel: normalized weights must sum to 1");
  }
}

double ipr(std::span<const double> v) {
  require_unit(v, "ipr");
  double sum = 0.0;
  for (double x : v) sum += x * x * x * x;
  return sum;
}

double participation_score(std::span<const double> v) {
  return 1.0 / (static_cast<double>(v.size()) * ipr(v));
}

std::vector<double> average_direction(const std::vector<std::vector<double>>& vectors,
                                      std::span<const double> weights) {
  require(!vectors.empty(), "average_direction: no vectors");
  require(vectors.size() == weights.size(), "average_direction: weight count mismatch");
  const size_t n = vectors.front().size();
  std::vector<double> resultant(n, 0.0);
  for (size_t k = 0; k < vectors.size(); ++k) {
    require(vectors[k].size() == n, "average_direction: vectors must share a dimension");
    require(weights[k] > 0.0, "average_direction: weights must be positive");
    require_unit(vectors[k], "average_direction");
    for (size_t i = 0; i < n; ++i) resultant[i] += weights[k] * vectors[k][i];
  }
  const double norm = l2_norm(resultant);
  if (norm < 1e-12)
    throw NumericError("average_direction: antipodal cancellation leaves no direction");
  for (double& x : resultant) x /= norm;
  return resultant;
}

double circular_variance(std::span<const double> angles) {
  require(!angles.empty(), "circular_variance: no angles");
  double c = 0.0;
  double s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double count = static_cast<double>(angles.size());
  return 1.0 - std::sqrt(c * c + s * s) / count;
}

StabilizedSeries filter_eigenbases(const EigenSeries& series, const FilterKernel& kernel,
                                   Method reorient_method) {
  series.validate();
  kernel.validate();
  const int n = series.dim();
  const int length = static_cast<int>(series.snapshots.size());
  const int taps = static_cast<int>(kernel.weights.size());
  require(length >= taps, "filter_eigenbases: series shorter than the kernel");

  const auto filtered_eigenvalues = filter_eigenvalues(series, kernel);

  StabilizedSeries out;
  out.delay = kernel.mean_lag();
  const int windows = length - taps + 1;
  out.bases.reserve(static_cast<size_t>(windows));
  out.angle_matrices.reserve(static_cast<size_t>(windows));
  out.eigenvalues = filtered_eigenvalues;
  out.timestamps.reserve(static_cast<size_t>(windows));

  OrientOptions options;
  options.method = reorient_method;
  options.ortho_tol = -1.0;  // blended matrices are deliberately not orthonormal

  for (int t = 0; t < windows; ++t) {
    // (h * V)[n]: h[k] weights the sample k steps back from the window end.
    Matrix blended(n, n);
    for (int k = 0; k < taps; ++k) {
      const Matrix& snap =
          series.snapshots[static_cast<size_t>(t + taps - 1 - k)].oriented_basis;
      const double w = kernel.weights[static_cast<size_t>(k)];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) blended(i, j) += w * snap(i, j);
    }
    for (int j = 0; j < n; ++j) {
      const auto col = blended.column(j);
      const double norm = l2_norm(col);
      if (norm < 1e-12)
        throw NumericError("filter_eigenbases: blended column collapsed to zero");
      blended.scale_column(j, 1.0 / norm);
    }

    EigenSystem blended_sys{std::move(blended), filtered_eigenvalues[static_cast<size_t>(t)]};
    OrientationResult oriented = orient_eigenvectors(blended_sys, options);
    out.bases.push_back(generate_oriented_eigenvectors(oriented.angles));
    out.angle_matrices.push_back(std::move(oriented.angles));
    out.timestamps.push_back(series.timestamps[static_cast<size_t>(t + taps - 1)]);
  }
  return out;
}

std::vector<std::vector<double>> filter_eigenvalues(const EigenSeries& series,
                                                    const FilterKernel& kernel) {
  series.validate();
  const FilterKernel h = kernel.normalized ? kernel : kernel.normalized_copy();
  const int n = series.dim();
  const int length = static_cast<int>(series.snapshots.size());
  const int taps = static_cast<int>(h.weights.size());
  require(length >= taps, "filter_eigenvalues: series shorter than the kernel");

  std::vector<std::vector<double>> out;
  out.reserve(static_cast<size_t>(length - taps + 1));
  for (int t = 0; t + taps <= length; ++t) {
    std::vector<double> bar(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < taps; ++k) {
      const auto& evals = series.snapshots[static_cast<size_t>(t + taps - 1 - k)].sorted_eigenvalues;
      for (int i = 0; i < n; ++i) bar[static_cast<size_t>(i)] += h.weights[static_cast<size_t>(k)] * evals[static_cast<size_t>(i)];
    }
    out.push_back(std::move(bar));
  }
  return out;
}

AngleMatrix static_stabilize(const AngleMatrix& angles, int informative_count) {
  const int n = angles.dim();
  require(0 <= informative_count && informative_count <= n - 1,
          "static_stabilize: informative count out of range");
  AngleMatrix out(n);
  for (int k = 0; k < informative_count; ++k) {
    out.set_row(k, angles.row(k));
  }
  // Rows informative_count..n-2 stay zero: those subspace rotations are identity.
  return out;
}

EigenSeries orient_series(const std::vector<EigenSystem>& snapshots,
                          std::span<const double> timestamps, const OrientOptions& options) {
  require(snapshots.size() == timestamps.size(), "orient_series: timestamp count mismatch");
  EigenSeries series;
  series.snapshots.reserve(snapshots.size());
  series.timestamps.assign(timestamps.begin(), timestamps.end());
  for (const auto& snap : snapshots) {
    series.snapshots.push_back(orient_eigenvectors(snap, options));
  }
  series.validate();
  return series;
}

}  // namespace eigenorient
