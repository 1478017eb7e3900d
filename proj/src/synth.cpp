#include "eigenorient/synth.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eigenorient {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

double wrap_major(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t == -kPi) t = kPi;
  return t;
}

}  // namespace

double SeededRng::uniform_major_angle() {
  // u = 0 maps to +pi; u -> 1 approaches -pi from above.
  return kPi - 2.0 * kPi * uniform01();
}

double SeededRng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]: keeps the log finite
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  spare_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

Matrix random_orthonormal(int dim, std::uint64_t seed, bool force_reflection) {
  require(dim >= 2, "random_orthonormal: dim must be at least 2");
  SeededRng rng(seed);
  AngleMatrix angles(dim);
  for (int k = 0; k < dim - 1; ++k) {
    angles(k, k + 1) = rng.uniform_major_angle();
    for (int j = k + 2; j < dim; ++j) {
      angles(k, j) = rng.uniform_in(-kPi / 2.0, kPi / 2.0);
    }
  }
  Matrix basis = generate_oriented_eigenvectors(angles);
  if (force_reflection) basis.scale_column(dim - 1, -1.0);
  return basis;
}

void WobbleSpec::validate() const {
  require(dim >= 2, "WobbleSpec: dim must be at least 2");
  require(base_angles.dim() == dim, "WobbleSpec: base angle matrix dimension mismatch");
  require(0 <= directed_modes && directed_modes <= dim - 1,
          "WobbleSpec: directed mode count out of range");
  require(angle_noise_sigma >= 0.0, "WobbleSpec: sigma must be nonnegative");
  require(series_length >= 1, "WobbleSpec: series length must be positive");
}

AngleMatrix wobble_fixture_base(int dim, int directed_modes) {
  require(dim >= 2, "wobble_fixture_base: dim must be at least 2");
  require(0 <= directed_modes && directed_modes <= dim - 1,
          "wobble_fixture_base: directed mode count out of range");
  // First angles straddle +-pi/2, alternating hemisphere sides.
  constexpr double kBoundaryAngles[3] = {1.45, -1.62, 1.52};
  AngleMatrix base(dim);
  for (int d = 0; d < directed_modes; ++d) {
    base(d, d + 1) = kBoundaryAngles[d % 3];
    for (int j = d + 2; j < dim; ++j) {
      base(d, j) = 0.4 / static_cast<double>(j - d);
    }
  }
  return base;
}

std::vector<double> wobble_eigenvalue_profile(int dim) {
  std::vector<double> profile(static_cast<size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    profile[static_cast<size_t>(k)] = 2.0 * static_cast<double>(dim) * std::pow(2.0, -k);
  }
  return profile;
}

SynthSeries wobble_series(const WobbleSpec& spec) {
  spec.validate();
  SeededRng rng(spec.seed);
  const std::vector<double> profile = wobble_eigenvalue_profile(spec.dim);

  SynthSeries series;
  series.snapshots.reserve(static_cast<size_t>(spec.series_length));
  series.timestamps.reserve(static_cast<size_t>(spec.series_length));

  for (int step = 0; step < spec.series_length; ++step) {
    AngleMatrix angles = spec.base_angles;
    for (int d = 0; d < spec.directed_modes; ++d) {
      angles(d, d + 1) = wrap_major(angles(d, d + 1) + spec.angle_noise_sigma * rng.gaussian());
    }
    for (int u = spec.directed_modes; u < spec.dim - 1; ++u) {
      angles(u, u + 1) = rng.uniform_major_angle();
      for (int j = u + 2; j < spec.dim; ++j) {
        angles(u, j) = rng.uniform_in(-kPi / 2.0, kPi / 2.0);
      }
    }
    Matrix basis = generate_oriented_eigenvectors(angles);
    if (spec.reflection_parity == WobbleSpec::Parity::odd) {
      const int flipped = static_cast<int>(rng.uniform01() * spec.dim);
      basis.scale_column(std::min(flipped, spec.dim - 1), -1.0);
    }
    series.snapshots.push_back(EigenSystem{std::move(basis), profile});
    series.timestamps.push_back(static_cast<double>(step));
  }
  return series;
}

}  // namespace eigenorient
