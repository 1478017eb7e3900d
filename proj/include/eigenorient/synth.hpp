#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "eigenorient/matrix.hpp"
#include "eigenorient/orientation.hpp"

namespace eigenorient {

/// Deterministic generator for fixtures: a seeded mt19937_64 with fixed
/// output mappings, so identical seeds give identical streams on every
/// platform. Uniforms come from the top 53 bits of each draw; Gaussians
/// pair two uniforms through Box-Muller, cosine branch first.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// [0, 1)
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// (-pi, pi]: major-angle range.
  double uniform_major_angle();

  /// [lo, hi)
  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal.
  double gaussian();

  std::uint64_t next_raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// A basis sampled by composing all N(N-1)/2 plane rotations with random
/// angles (first angle of each subspace major, the rest minor). With
/// force_reflection the last column is negated, giving det -1.
Matrix random_orthonormal(int dim, std::uint64_t seed, bool force_reflection = false);

struct WobbleSpec {
  enum class Parity { even, odd };

  int dim = 7;
  AngleMatrix base_angles;
  int directed_modes = 3;
  double angle_noise_sigma = 0.2;
  int series_length = 40;
  std::uint64_t seed = 0;
  Parity reflection_parity = Parity::even;

  void validate() const;
};

struct SynthSeries {
  std::vector<EigenSystem> snapshots;
  std::vector<double> timestamps;
};

/// Base angles for wobble fixtures: directed modes get first angles near
/// the hemisphere boundary (so minor-angle bookkeeping wraps while the
/// full-circle representation does not) plus mild deterministic minor
/// structure; undirected rows are redrawn per step anyway.
AngleMatrix wobble_fixture_base(int dim, int directed_modes);

/// Eigenbasis time series with directed modes that wobble around their
/// base pointing directions and undirected modes that scatter uniformly.
/// Draw order per step: one Gaussian per directed mode (first angle),
/// then each undirected row (major angle, then its minor angles), then,
/// for odd parity, one uniform to pick the reflected column. Eigenvalues
/// follow the fixed profile 2N * 2^-k.
SynthSeries wobble_series(const WobbleSpec& spec);

/// The eigenvalue profile attached to wobble snapshots.
std::vector<double> wobble_eigenvalue_profile(int dim);

}  // namespace eigenorient
