#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eigenorient/eigensolver.hpp"
#include "eigenorient/matrix.hpp"
#include "eigenorient/synth.hpp"
#include "test_helpers.hpp"

using namespace eigenorient;
constexpr double kPi = std::numbers::pi;

TEST_CASE("make_givens: zero angle is the identity") {
  const Matrix r = make_givens({3, 0, 1, 0.0});
  CHECK(max_abs_diff(r, Matrix::identity(3)) == 0.0);
}

TEST_CASE("make_givens: quarter turn in 2D") {
  const Matrix r = make_givens({2, 0, 1, kPi / 2.0});
  CHECK(r(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r(0, 1) == doctest::Approx(-1.0));
  CHECK(r(1, 0) == doctest::Approx(1.0));
  CHECK(r(1, 1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("make_givens: plane (0,2) in 4D puts -sin above the diagonal") {
  const double theta = 0.37;
  const Matrix r = make_givens({4, 0, 2, theta});
  CHECK(r(0, 0) == doctest::Approx(std::cos(theta)));
  CHECK(r(2, 2) == doctest::Approx(std::cos(theta)));
  CHECK(r(0, 2) == doctest::Approx(-std::sin(theta)));
  CHECK(r(2, 0) == doctest::Approx(std::sin(theta)));
  CHECK(r(1, 1) == 1.0);
  CHECK(r(3, 3) == 1.0);
  CHECK(r(0, 1) == 0.0);
  CHECK(r(1, 2) == 0.0);
}

TEST_CASE("make_givens: bad plane indices are rejected") {
  CHECK_THROWS_AS(make_givens({3, 1, 1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_givens({3, 0, 3, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(make_givens({3, -1, 1, 0.1}), std::invalid_argument);
}

TEST_CASE("make_givens: transpose flips the angle and the product is I") {
  for (int k = 0; k < 25; ++k) {
    const double theta = -kPi + 2.0 * kPi * (k + 0.5) / 25.0;
    const Matrix r = make_givens({5, 1, 3, theta});
    const Matrix r_neg = make_givens({5, 1, 3, -theta});
    CHECK(max_abs_diff(r.transposed(), r_neg) <= 1e-12);
    CHECK(max_abs_diff(r * r.transposed(), Matrix::identity(5)) <= 1e-12);
    CHECK(det(r) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("compose_cascade: all-zero angles give the identity for dims 2..16") {
  for (int dim = 2; dim <= 16; ++dim) {
    const std::vector<double> zeros(static_cast<size_t>(dim - 1), 0.0);
    CHECK(max_abs_diff(compose_cascade(dim, 0, zeros), Matrix::identity(dim)) == 0.0);
  }
}

TEST_CASE("compose_cascade: a single nonzero angle reduces to one rotation") {
  std::vector<double> angles{0.0, 0.62, 0.0};
  const Matrix cascade = compose_cascade(4, 0, angles);
  const Matrix single = make_givens({4, 0, 2, 0.62});
  CHECK(max_abs_diff(cascade, single) <= 1e-15);
}

TEST_CASE("compose_cascade: transposed cascade annihilates the forward trig vector") {
  // Oracle: the vector is evaluated directly from the products of sines and
  // cosines, not through any solver.
  SeededRng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> angles{rng.uniform_major_angle(), rng.uniform_in(-kPi / 2, kPi / 2),
                               rng.uniform_in(-kPi / 2, kPi / 2)};
    const std::vector<double> forward = testutil::trig_forward_vector(angles);
    CHECK(testutil::l2_norm(forward) == doctest::Approx(1.0).epsilon(1e-13));
    const Matrix cascade = compose_cascade(4, 0, angles);
    const std::vector<double> restored = cascade.transposed() * forward;
    CHECK(testutil::distance_from_axis(restored, 0) <= 1e-12);
  }
}

TEST_CASE("compose_cascade: angle count must match the pivot") {
  CHECK_THROWS_AS(compose_cascade(4, 0, std::vector<double>{0.1}), std::invalid_argument);
}

TEST_CASE("symmetric_eigen: identity eigenvalues are all one") {
  const EigenDecomposition eig = symmetric_eigen(Matrix::identity(5));
  for (double v : eig.eigenvalues) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("symmetric_eigen: diagonal matrix") {
  const std::vector<double> d{3.0, 1.0};
  const EigenDecomposition eig = symmetric_eigen(Matrix::diagonal(d));
  std::vector<double> sorted = eig.eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == doctest::Approx(1.0));
  CHECK(sorted[1] == doctest::Approx(3.0));
  // Eigenvectors are +-e1, +-e2 in some order.
  for (int j = 0; j < 2; ++j) {
    const auto col = eig.eigenvectors.column(j);
    CHECK(std::abs(std::abs(col[0]) + std::abs(col[1]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("symmetric_eigen: reconstruction residual on a random symmetric 6x6") {
  SeededRng rng(77);
  Matrix m(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      const double x = rng.uniform_in(-2.0, 2.0);
      m(i, j) = x;
      m(j, i) = x;
    }
  }
  const EigenDecomposition eig = symmetric_eigen(m);
  CHECK(is_orthonormal(eig.eigenvectors, 1e-10));
  const Matrix reconstructed =
      eig.eigenvectors * Matrix::diagonal(eig.eigenvalues) * eig.eigenvectors.transposed();
  CHECK(max_abs_diff(reconstructed, m) <= 1e-8 * m.max_abs());
}

TEST_CASE("symmetric_eigen: rejects non-symmetric input") {
  Matrix m(3, 3);
  m(0, 1) = 0.5;
  m(1, 0) = -0.5;
  CHECK_THROWS_AS(symmetric_eigen(m), std::invalid_argument);
}

TEST_CASE("det: identity and a reflection") {
  CHECK(det(Matrix::identity(4)) == 1.0);
  const std::vector<double> d{1.0, 1.0, -1.0};
  CHECK(det(Matrix::diagonal(d)) == doctest::Approx(-1.0));
}

TEST_CASE("det: a product of ten rotations stays in SO(N)") {
  SeededRng rng(5150);
  Matrix product = Matrix::identity(6);
  for (int k = 0; k < 10; ++k) {
    const int i = static_cast<int>(rng.uniform01() * 5);
    const int j = i + 1 + static_cast<int>(rng.uniform01() * (5 - i));
    product = product * make_givens({6, i, std::min(j, 5), rng.uniform_major_angle()});
  }
  CHECK(det(product) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("is_orthonormal: accepts rotations, rejects a scaled column") {
  CHECK(is_orthonormal(Matrix::identity(3), 1e-12));
  CHECK(is_orthonormal(make_givens({2, 0, 1, 0.3}), 1e-12));
  Matrix m = Matrix::identity(3);
  m.scale_column(1, 1.01);
  CHECK_FALSE(is_orthonormal(m, 1e-6));  // Gram deviation is 0.0201
}

TEST_CASE("Matrix: constructors refuse non-finite entries") {
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Matrix(1, 1, {std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}
