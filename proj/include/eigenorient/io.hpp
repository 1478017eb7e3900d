#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eigenorient/matrix.hpp"
#include "eigenorient/orientation.hpp"

namespace eigenorient {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Writes content to a temp file beside `path`, then renames it in place.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// One matrix row per CSV line, full-precision decimals.
std::string matrix_to_csv(const Matrix& m);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

/// Throws ParseError with the 1-based line and field position on bad input.
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Rectangular records-by-features panel; same format as a matrix.
Matrix read_panel_csv(const std::filesystem::path& path);

/// On-disk eigenseries: a manifest plus one basis CSV per snapshot.
/// Orientation outputs reuse the same layout with extra per-snapshot
/// fields, so a pipeline's output is always a valid input.
struct SeriesBundle {
  int dim = 0;
  std::vector<double> timestamps;
  std::vector<std::vector<double>> eigenvalues;
  std::vector<Matrix> bases;
  std::optional<std::string> method;
  std::optional<int> records;
  // Present on oriented outputs only.
  std::vector<Matrix> angle_matrices;              // dense upper-triangular
  std::vector<std::vector<double>> reflections;
  std::vector<std::vector<int>> sort_indices;
  std::vector<std::vector<double>> participation_scores;

  bool has_orientation() const { return !angle_matrices.empty(); }
};

SeriesBundle read_series(const std::filesystem::path& directory);
void write_series(const std::filesystem::path& directory, const SeriesBundle& bundle);

}  // namespace eigenorient
