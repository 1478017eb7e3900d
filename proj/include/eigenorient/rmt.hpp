#pragma once

#include <span>
#include <utility>
#include <vector>

#include "eigenorient/matrix.hpp"
#include "eigenorient/orientation.hpp"

namespace eigenorient {

/// Marchenko-Pastur parameters for one classification step.
struct MPModel {
  double q;             // effective aspect ratio N_eff / T
  double lambda_minus;  // (1 - sqrt(q))^2
  double lambda_plus;   // (1 + sqrt(q))^2
  double lambda_bar;    // rescaling of the remaining spectrum
};

/// Prefix split of a descending spectrum into informative modes and
/// sampling noise, with the model used at each step of the iteration.
struct ModeClassification {
  std::vector<int> informative;
  std::vector<int> noise;
  std::vector<MPModel> models;  // one per edge test performed
};

/// Support edges ((1 - sqrt(q))^2, (1 + sqrt(q))^2). Requires q > 0.
std::pair<double, double> mp_support(double q);

/// Density sqrt((l+ - l)(l - l-)) / (2 pi q l); zero outside the support.
double mp_density(double lambda, double q);

/// Density of the lambda_bar-rescaled law: rho(lambda / lambda_bar) / lambda_bar.
double rescaled_mp_density(double lambda, double q, double lambda_bar);

/// Iteratively peels informative modes off the top of the spectrum. At
/// each step the remaining modes define lambda_bar and an adjusted
/// q' = (N - K) / T; the next eigenvalue is informative iff it exceeds
/// edge_multiplier * lambda_bar * lambda_plus(q'). Stops at the first
/// failure, so the informative set is always a prefix.
ModeClassification classify_modes(std::span<const double> eigenvalues_descending, int records,
                                  double edge_multiplier = 1.0);

/// Applies the first K subspace cascades (transposed) to the oriented
/// basis, leaving an exact identity block on the informative modes and an
/// isolated noise block. Returns the cascades so the caller can rotate back.
std::pair<Matrix, std::vector<Matrix>> rotate_away_informative(const OrientationResult& result,
                                                               int informative_count);

/// alpha * corr + (1 - alpha) * I: linear shrinkage toward the identity.
Matrix lw_shrink(const Matrix& corr, double alpha);

/// Rotates the informative modes away, shrinks the isolated noise block
/// toward the identity, and rotates back. alpha = 1 reproduces
/// V diag(eigenvalues) V^T.
Matrix shrink_noise_subspace(const OrientationResult& result,
                             std::span<const double> eigenvalues, int informative_count,
                             double alpha);

}  // namespace eigenorient
