#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "eigenorient/correlation.hpp"
#include "eigenorient/eigensolver.hpp"
#include "eigenorient/rmt.hpp"
#include "eigenorient/synth.hpp"
#include "test_helpers.hpp"

using namespace eigenorient;

namespace {

// Draws a records-by-features panel whose population covariance is
// I + sum_m (spike_m - 1) u_m u_m^T with orthonormal spike directions.
Matrix spiked_panel(int features, int records, const std::vector<double>& spikes,
                    std::uint64_t seed) {
  // Orthonormal spike directions from deterministic sign patterns.
  std::vector<std::vector<double>> directions;
  const double root_n = std::sqrt(static_cast<double>(features));
  for (size_t m = 0; m < spikes.size(); ++m) {
    std::vector<double> u(static_cast<size_t>(features));
    for (int i = 0; i < features; ++i) {
      const int block = (m == 0) ? 0 : ((i * static_cast<int>(m + 1)) / features);
      u[static_cast<size_t>(i)] = ((m == 0) || (block % 2 == 0) == (i % 2 == 0)) ? 1.0 : -1.0;
    }
    // Gram-Schmidt against earlier directions keeps them orthonormal.
    for (const auto& prev : directions) {
      double dot = 0.0;
      for (int i = 0; i < features; ++i) dot += u[static_cast<size_t>(i)] * prev[static_cast<size_t>(i)];
      for (int i = 0; i < features; ++i) u[static_cast<size_t>(i)] -= dot * prev[static_cast<size_t>(i)];
    }
    double norm = 0.0;
    for (double x : u) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : u) x /= (norm > 1e-9 ? norm : root_n);
    directions.push_back(std::move(u));
  }

  SeededRng rng(seed);
  Matrix panel(records, features);
  std::vector<double> gain(spikes.size());
  for (size_t m = 0; m < spikes.size(); ++m) gain[m] = std::sqrt(spikes[m]) - 1.0;
  for (int t = 0; t < records; ++t) {
    std::vector<double> z(static_cast<size_t>(features));
    for (double& x : z) x = rng.gaussian();
    // x = z + sum_m (sqrt(spike)-1) (u.z) u, so Cov = I + (spike-1) u u^T.
    for (size_t m = 0; m < spikes.size(); ++m) {
      double proj = 0.0;
      for (int i = 0; i < features; ++i)
        proj += directions[m][static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
      for (int i = 0; i < features; ++i)
        z[static_cast<size_t>(i)] += gain[m] * proj * directions[m][static_cast<size_t>(i)];
    }
    for (int i = 0; i < features; ++i) panel(t, i) = z[static_cast<size_t>(i)];
  }
  return panel;
}

std::vector<double> descending_sample_spectrum(const Matrix& panel) {
  const Matrix corr = sample_correlation(panel);
  EigenDecomposition eig = symmetric_eigen(corr);
  std::sort(eig.eigenvalues.begin(), eig.eigenvalues.end(), std::greater<double>());
  return eig.eigenvalues;
}

}  // namespace

TEST_CASE("mp_support: closed forms and the q -> 0 collapse") {
  const auto [lo, hi] = mp_support(0.25);
  CHECK(lo == doctest::Approx(0.25));
  CHECK(hi == doctest::Approx(2.25));

  const auto [lo1, hi1] = mp_support(1.0);
  CHECK(lo1 == doctest::Approx(0.0));
  CHECK(hi1 == doctest::Approx(4.0));

  const auto [lo0, hi0] = mp_support(1e-10);
  CHECK(lo0 == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(hi0 == doctest::Approx(1.0).epsilon(1e-4));

  CHECK_THROWS_AS(mp_support(0.0), std::invalid_argument);
  CHECK_THROWS_AS(mp_support(-0.5), std::invalid_argument);
}

TEST_CASE("mp_density: vanishes off and at the support edges") {
  CHECK(mp_density(0.1, 0.25) == 0.0);
  CHECK(mp_density(3.0, 0.25) == 0.0);
  CHECK(mp_density(0.25, 0.25) == 0.0);
  CHECK(mp_density(2.25, 0.25) == 0.0);
  CHECK(mp_density(1.0, 0.25) > 0.0);
}

TEST_CASE("mp_density: unit mass for the spec'd aspect ratios") {
  for (double q : {0.1, 0.25, 0.5, 0.9}) {
    const auto [lo, hi] = mp_support(q);
    const double mass =
        testutil::edge_smoothed_mass([q](double x) { return mp_density(x, q); }, lo, hi, 1e-10);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("rescaled_mp_density: scaling behavior and unit mass") {
  CHECK(rescaled_mp_density(1.3, 0.25, 1.0) == mp_density(1.3, 0.25));

  // Support stretches to (0.5, 4.5) for lambda_bar = 2.
  CHECK(rescaled_mp_density(0.49, 0.25, 2.0) == 0.0);
  CHECK(rescaled_mp_density(0.51, 0.25, 2.0) > 0.0);
  CHECK(rescaled_mp_density(4.49, 0.25, 2.0) > 0.0);
  CHECK(rescaled_mp_density(4.51, 0.25, 2.0) == 0.0);

  const double mass = testutil::edge_smoothed_mass(
      [](double x) { return rescaled_mp_density(x, 0.25, 2.0); }, 0.5, 4.5, 1e-10);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("classify_modes: flat spectrum is all noise") {
  const std::vector<double> flat(12, 1.0);
  const ModeClassification modes = classify_modes(flat, 100);
  CHECK(modes.informative.empty());
  CHECK(modes.noise.size() == 12);
  CHECK(modes.models.size() == 1);
}

TEST_CASE("classify_modes: seeded single spike") {
  const Matrix panel = spiked_panel(20, 400, {5.0}, 1001);
  const auto spectrum = descending_sample_spectrum(panel);
  const ModeClassification modes = classify_modes(spectrum, 400);
  CHECK(modes.informative.size() == 1);
  CHECK(modes.informative[0] == 0);
}

TEST_CASE("classify_modes: seeded three spikes") {
  const Matrix panel = spiked_panel(20, 400, {12.0, 8.0, 5.0}, 2002);
  const auto spectrum = descending_sample_spectrum(panel);
  const ModeClassification modes = classify_modes(spectrum, 400);
  CHECK(modes.informative.size() == 3);
}

TEST_CASE("classify_modes: seeded pure noise") {
  const Matrix panel = spiked_panel(20, 400, {}, 3003);
  const auto spectrum = descending_sample_spectrum(panel);
  const ModeClassification modes = classify_modes(spectrum, 400);
  CHECK(modes.informative.empty());
}

TEST_CASE("classify_modes: raising the top eigenvalue never loses informative modes") {
  const Matrix panel = spiked_panel(20, 400, {3.0}, 4004);
  std::vector<double> spectrum = descending_sample_spectrum(panel);
  size_t previous = classify_modes(spectrum, 400).informative.size();
  for (int step = 0; step < 6; ++step) {
    spectrum[0] += 1.5;
    const size_t count = classify_modes(spectrum, 400).informative.size();
    CHECK(count >= previous);
    previous = count;
  }
}

TEST_CASE("classify_modes: input validation") {
  const std::vector<double> spectrum{3.0, 1.0, 0.5};
  CHECK_THROWS_AS(classify_modes(spectrum, 3), std::invalid_argument);
  const std::vector<double> ascending{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(classify_modes(ascending, 100), std::invalid_argument);
  const std::vector<double> negative{3.0, -1.0};
  CHECK_THROWS_AS(classify_modes(negative, 100), std::invalid_argument);
}

TEST_CASE("finite-size sanity: Gaussian sample spectrum hugs the MP support") {
  // N=50, T=500: at most 5% of the eigenvalues may spill outside the edges.
  const Matrix panel = spiked_panel(50, 500, {}, 5005);
  const auto spectrum = descending_sample_spectrum(panel);
  const auto [lo, hi] = mp_support(50.0 / 500.0);
  int outside = 0;
  for (double v : spectrum) outside += (v < lo || v > hi);
  CHECK(outside <= 2);  // 5% of 50
}

TEST_CASE("rotate_away_informative: identity block and round trip") {
  const Matrix v = random_orthonormal(7, 7007);
  const std::vector<double> evals{7, 6, 5, 4, 3, 2, 1};
  const OrientationResult result = orient_eigenvectors(EigenSystem{v, evals}, Method::arctan2);

  SUBCASE("K = 0 leaves the basis untouched") {
    const auto [rotated, cascades] = rotate_away_informative(result, 0);
    CHECK(cascades.empty());
    CHECK(max_abs_diff(rotated, result.oriented_basis) == 0.0);
  }

  SUBCASE("K = 3 exposes the block structure") {
    const auto [rotated, cascades] = rotate_away_informative(result, 3);
    REQUIRE(cascades.size() == 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 7; ++j) {
        const double expected = (i == j) ? 1.0 : 0.0;
        CHECK(std::abs(rotated(i, j) - expected) <= 1e-10);
        CHECK(std::abs(rotated(j, i) - expected) <= 1e-10);
      }
    }
    CHECK(is_orthonormal(rotated, 1e-9));
    CHECK(det(rotated) == doctest::Approx(1.0).epsilon(1e-9));

    Matrix back = rotated;
    for (int i = 2; i >= 0; --i) back = cascades[static_cast<size_t>(i)] * back;
    CHECK(max_abs_diff(back, result.oriented_basis) <= 1e-10);
  }

  SUBCASE("K out of range") {
    CHECK_THROWS_AS(rotate_away_informative(result, 7), std::invalid_argument);
    CHECK_THROWS_AS(rotate_away_informative(result, -1), std::invalid_argument);
  }
}

TEST_CASE("lw_shrink: endpoints and the linear blend") {
  Matrix corr = Matrix::identity(3);
  corr(0, 1) = corr(1, 0) = 0.6;
  corr(1, 2) = corr(2, 1) = 0.6;

  CHECK(max_abs_diff(lw_shrink(corr, 1.0), corr) == 0.0);
  CHECK(max_abs_diff(lw_shrink(corr, 0.0), Matrix::identity(3)) == 0.0);

  const Matrix half = lw_shrink(corr, 0.5);
  CHECK(half(0, 1) == doctest::Approx(0.3));
  CHECK(half(0, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(lw_shrink(corr, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(lw_shrink(corr, -0.1), std::invalid_argument);
}

TEST_CASE("shrink_noise_subspace: endpoints, degenerate K, and positive spectrum") {
  const Matrix v = random_orthonormal(6, 606);
  const std::vector<double> evals{3.0, 1.5, 0.8, 0.4, 0.2, 0.1};
  const OrientationResult result = orient_eigenvectors(EigenSystem{v, evals}, Method::arctan2);

  const Matrix reference =
      result.oriented_basis * Matrix::diagonal(evals) * result.oriented_basis.transposed();

  SUBCASE("alpha = 1 reproduces the reconstruction") {
    const Matrix out = shrink_noise_subspace(result, evals, 2, 1.0);
    CHECK(max_abs_diff(out, reference) <= 1e-9);
  }

  SUBCASE("alpha = 0, K = 0 collapses to the identity") {
    const Matrix out = shrink_noise_subspace(result, evals, 0, 0.0);
    CHECK(max_abs_diff(out, Matrix::identity(6)) <= 1e-12);
  }

  SUBCASE("K = N-1 blends only the irreducible mode") {
    const Matrix out = shrink_noise_subspace(result, evals, 5, 0.5);
    CHECK(out.rows() == 6);
    // alpha = 1 portion of the last mode plus half an identity unit.
    const Matrix full = shrink_noise_subspace(result, evals, 5, 1.0);
    CHECK(max_abs_diff(full, reference) <= 1e-9);
  }

  SUBCASE("output stays symmetric PSD") {
    for (double alpha : {0.0, 0.3, 0.7, 1.0}) {
      const Matrix out = shrink_noise_subspace(result, evals, 2, alpha);
      for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) CHECK(out(i, j) == doctest::Approx(out(j, i)));
      EigenDecomposition eig = symmetric_eigen(out);
      for (double lambda : eig.eigenvalues) CHECK(lambda >= -1e-9);
    }
  }
}
