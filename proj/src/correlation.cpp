#include "eigenorient/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eigenorient/errors.hpp"

namespace eigenorient {

Matrix reconstruct_correlation(const Matrix& basis, std::span<const double> eigenvalues) {
  if (!basis.square()) throw std::invalid_argument("reconstruct_correlation: basis must be square");
  const int n = basis.rows();
  if (static_cast<int>(eigenvalues.size()) != n)
    throw std::invalid_argument("reconstruct_correlation: eigenvalue count mismatch");
  for (double e : eigenvalues) {
    if (!(e >= 0.0) || !std::isfinite(e))
      throw std::invalid_argument("reconstruct_correlation: eigenvalues must be nonnegative");
  }

  Matrix c0(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += basis(i, k) * eigenvalues[static_cast<size_t>(k)] * basis(j, k);
      }
      c0(i, j) = acc;
      c0(j, i) = acc;
    }
  }

  std::vector<double> inv_scale(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double variance = c0(i, i);
    if (variance <= 1e-14)
      throw NumericError("reconstruct_correlation: vanishing diagonal scale");
    inv_scale[static_cast<size_t>(i)] = 1.0 / std::sqrt(variance);
  }

  Matrix c(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double value =
          inv_scale[static_cast<size_t>(i)] * c0(i, j) * inv_scale[static_cast<size_t>(j)];
      c(i, j) = value;
      c(j, i) = value;
    }
  }
  return c;
}

Matrix sample_correlation(const Matrix& panel) {
  const int records = panel.rows();
  const int features = panel.cols();
  if (records <= features)
    throw std::invalid_argument(
        "sample_correlation: need more records than features, the panel is singular otherwise");

  std::vector<double> mean(static_cast<size_t>(features), 0.0);
  for (int t = 0; t < records; ++t)
    for (int j = 0; j < features; ++j) mean[static_cast<size_t>(j)] += panel(t, j);
  for (double& m : mean) m /= static_cast<double>(records);

  std::vector<double> scale(static_cast<size_t>(features), 0.0);
  for (int t = 0; t < records; ++t) {
    for (int j = 0; j < features; ++j) {
      const double d = panel(t, j) - mean[static_cast<size_t>(j)];
      scale[static_cast<size_t>(j)] += d * d;
    }
  }
  for (int j = 0; j < features; ++j) {
    if (scale[static_cast<size_t>(j)] <= 0.0)
      throw std::invalid_argument("sample_correlation: column " + std::to_string(j) +
                                  " has zero variance");
    scale[static_cast<size_t>(j)] = std::sqrt(scale[static_cast<size_t>(j)]);
  }

  Matrix corr(features, features);
  for (int i = 0; i < features; ++i) {
    for (int j = i; j < features; ++j) {
      double acc = 0.0;
      for (int t = 0; t < records; ++t) {
        acc += (panel(t, i) - mean[static_cast<size_t>(i)]) *
               (panel(t, j) - mean[static_cast<size_t>(j)]);
      }
      const double value = acc / (scale[static_cast<size_t>(i)] * scale[static_cast<size_t>(j)]);
      corr(i, j) = value;
      corr(j, i) = value;
    }
    corr(i, i) = 1.0;
  }
  return corr;
}

DispersionReport dispersion_report(const std::vector<Matrix>& series) {
  if (series.empty()) throw std::invalid_argument("dispersion_report: empty series");
  const int n = series.front().rows();
  for (const Matrix& m : series) {
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("dispersion_report: matrices must share a dimension");
  }

  DispersionReport report;
  report.dim = n;
  report.samples = static_cast<long>(series.size());
  report.single_sample = series.size() == 1;

  const double count = static_cast<double>(series.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      DispersionEntry entry{i, j, series.front()(i, j), series.front()(i, j), 0.0, 0.0};
      double sum = 0.0;
      for (const Matrix& m : series) {
        const double x = m(i, j);
        entry.min = std::min(entry.min, x);
        entry.max = std::max(entry.max, x);
        sum += x;
      }
      entry.mean = sum / count;
      if (series.size() > 1 && entry.min != entry.max) {
        double ss = 0.0;
        for (const Matrix& m : series) {
          const double d = m(i, j) - entry.mean;
          ss += d * d;
        }
        entry.stdev = std::sqrt(ss / (count - 1.0));
      }
      report.entries.push_back(entry);
    }
  }
  return report;
}

}  // namespace eigenorient
