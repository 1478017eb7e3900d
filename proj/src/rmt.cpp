#include "eigenorient/rmt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eigenorient {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

double mean_tail(std::span<const double> values, size_t from) {
  double sum = 0.0;
  for (size_t i = from; i < values.size(); ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - from);
}

}  // namespace

std::pair<double, double> mp_support(double q) {
  require(q > 0.0, "mp_support: q must be positive");
  const double root = std::sqrt(q);
  return {(1.0 - root) * (1.0 - root), (1.0 + root) * (1.0 + root)};
}

double mp_density(double lambda, double q) {
  const auto [lo, hi] = mp_support(q);
  if (lambda <= lo || lambda >= hi || lambda <= 0.0) return 0.0;
  return std::sqrt((hi - lambda) * (lambda - lo)) / (2.0 * std::numbers::pi * q * lambda);
}

double rescaled_mp_density(double lambda, double q, double lambda_bar) {
  require(lambda_bar > 0.0, "rescaled_mp_density: lambda_bar must be positive");
  return mp_density(lambda / lambda_bar, q) / lambda_bar;
}

ModeClassification classify_modes(std::span<const double> eigenvalues_descending, int records,
                                  double edge_multiplier) {
  const int n = static_cast<int>(eigenvalues_descending.size());
  require(n >= 2, "classify_modes: need at least two modes");
  require(records > n, "classify_modes: records must exceed the mode count");
  require(edge_multiplier > 0.0, "classify_modes: edge multiplier must be positive");
  for (int i = 0; i < n; ++i) {
    require(eigenvalues_descending[static_cast<size_t>(i)] >= -1e-12,
            "classify_modes: eigenvalues must be nonnegative");
    if (i > 0) {
      require(eigenvalues_descending[static_cast<size_t>(i)] <=
                  eigenvalues_descending[static_cast<size_t>(i - 1)] + 1e-12,
              "classify_modes: eigenvalues must be descending");
    }
  }

  ModeClassification out;
  int informative = 0;
  // Peeling a mode off the noise shifts the residual spectrum left, so the
  // model is refit before every edge test.
  while (informative < n - 1) {
    const double lambda_bar = mean_tail(eigenvalues_descending, static_cast<size_t>(informative));
    const double q_eff = static_cast<double>(n - informative) / static_cast<double>(records);
    const auto [lo, hi] = mp_support(q_eff);
    out.models.push_back(MPModel{q_eff, lo, hi, lambda_bar});
    const double edge = edge_multiplier * lambda_bar * hi;
    if (eigenvalues_descending[static_cast<size_t>(informative)] > edge) {
      ++informative;
    } else {
      break;
    }
  }
  for (int i = 0; i < n; ++i) {
    (i < informative ? out.informative : out.noise).push_back(i);
  }
  return out;
}

std::pair<Matrix, std::vector<Matrix>> rotate_away_informative(const OrientationResult& result,
                                                               int informative_count) {
  const int n = result.oriented_basis.rows();
  require(0 <= informative_count && informative_count <= n - 1,
          "rotate_away_informative: informative count out of range");
  Matrix work = result.oriented_basis;
  std::vector<Matrix> cascades;
  cascades.reserve(static_cast<size_t>(informative_count));
  for (int i = 0; i < informative_count; ++i) {
    Matrix cascade = compose_cascade(n, i, result.angles.row(i));
    work = cascade.transposed() * work;
    cascades.push_back(std::move(cascade));
  }
  return {std::move(work), std::move(cascades)};
}

Matrix lw_shrink(const Matrix& corr, double alpha) {
  require(corr.square(), "lw_shrink: matrix must be square");
  require(alpha >= 0.0 && alpha <= 1.0, "lw_shrink: alpha must lie in [0, 1]");
  const int n = corr.rows();
  for (int i = 0; i < n; ++i) {
    require(std::abs(corr(i, i) - 1.0) <= 1e-8, "lw_shrink: diagonal must be unit");
    for (int j = i + 1; j < n; ++j) {
      require(std::abs(corr(i, j) - corr(j, i)) <= 1e-8, "lw_shrink: matrix must be symmetric");
    }
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out(i, j) = alpha * corr(i, j) + ((i == j) ? (1.0 - alpha) : 0.0);
    }
  }
  return out;
}

Matrix shrink_noise_subspace(const OrientationResult& result,
                             std::span<const double> eigenvalues, int informative_count,
                             double alpha) {
  const int n = result.oriented_basis.rows();
  require(static_cast<int>(eigenvalues.size()) == n,
          "shrink_noise_subspace: eigenvalue count mismatch");
  require(alpha >= 0.0 && alpha <= 1.0, "shrink_noise_subspace: alpha must lie in [0, 1]");
  auto [rotated, cascades] = rotate_away_informative(result, informative_count);

  const int k = informative_count;
  const int m = n - k;
  // Noise block in the rotated frame: B diag(noise eigenvalues) B^T.
  Matrix noise_block(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int mode = 0; mode < m; ++mode) {
        acc += rotated(k + i, k + mode) * eigenvalues[static_cast<size_t>(k + mode)] *
               rotated(k + j, k + mode);
      }
      noise_block(i, j) = acc;
    }
  }

  Matrix assembled(n, n);
  for (int i = 0; i < k; ++i) assembled(i, i) = eigenvalues[static_cast<size_t>(i)];
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double blended =
          alpha * noise_block(i, j) + ((i == j) ? (1.0 - alpha) : 0.0);
      assembled(k + i, k + j) = blended;
    }
  }

  // Rotate back through the informative cascades, outermost last.
  Matrix out = std::move(assembled);
  for (int i = informative_count - 1; i >= 0; --i) {
    out = cascades[static_cast<size_t>(i)] * out * cascades[static_cast<size_t>(i)].transposed();
  }
  // Symmetrize away the residue of the two-sided products.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = avg;
      out(j, i) = avg;
    }
  }
  return out;
}

}  // namespace eigenorient
