#include "eigenorient/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "eigenorient/errors.hpp"

namespace eigenorient {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "manifest.json";

std::string read_file_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, const fs::path& path) {
  std::vector<std::vector<double>> rows;
  std::istringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    size_t start = 0;
    int field = 0;
    while (start <= line.size()) {
      size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      ++field;
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, value);
      while (ptr < last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
      if (ec != std::errc() || ptr != last) {
        throw ParseError("bad number in " + path.string(), line_number, field);
      }
      row.push_back(value);
      if (end == line.size()) break;
      start = end + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged row in " + path.string(), line_number, 1);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty matrix file " + path.string(), 1, 1);
  return rows;
}

Matrix rows_to_matrix(std::vector<std::vector<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = static_cast<int>(rows.front().size());
  std::vector<double> flat;
  flat.reserve(static_cast<size_t>(r) * c);
  for (auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
  return Matrix(r, c, std::move(flat));
}

std::string snapshot_file(const std::string& stem, size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%s_%04zu.csv", stem.c_str(), index);
  return buffer;
}

json require_key(const json& j, const char* key, const fs::path& where) {
  if (!j.contains(key))
    throw ParseError("manifest missing key '" + std::string(key) + "' in " + where.string(), 1, 1);
  return j.at(key);
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void atomic_write_text(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write file: " + tmp.string());
    out << content;
    if (!out.good()) throw std::invalid_argument("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::invalid_argument("rename failed for " + path.string() + ": " + ec.message());
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  atomic_write_text(path, matrix_to_csv(m));
}

Matrix read_matrix_csv(const fs::path& path) {
  return rows_to_matrix(parse_csv_rows(read_file_or_throw(path), path));
}

Matrix read_panel_csv(const fs::path& path) { return read_matrix_csv(path); }

SeriesBundle read_series(const fs::path& directory) {
  const fs::path manifest_path = directory / kManifestName;
  json manifest;
  try {
    manifest = json::parse(read_file_or_throw(manifest_path));
  } catch (const json::parse_error& err) {
    throw ParseError(std::string("bad manifest JSON: ") + err.what(), 1, 1);
  }

  SeriesBundle bundle;
  bundle.dim = require_key(manifest, "dim", manifest_path).get<int>();
  bundle.timestamps =
      require_key(manifest, "timestamps", manifest_path).get<std::vector<double>>();
  bundle.eigenvalues = require_key(manifest, "eigenvalues", manifest_path)
                           .get<std::vector<std::vector<double>>>();
  const auto basis_files =
      require_key(manifest, "bases", manifest_path).get<std::vector<std::string>>();
  if (manifest.contains("method")) bundle.method = manifest["method"].get<std::string>();
  if (manifest.contains("records")) bundle.records = manifest["records"].get<int>();

  if (basis_files.size() != bundle.timestamps.size() ||
      basis_files.size() != bundle.eigenvalues.size()) {
    throw ParseError("manifest lists inconsistent snapshot counts in " + manifest_path.string(),
                     1, 1);
  }
  for (const auto& file : basis_files) {
    Matrix basis = read_matrix_csv(directory / file);
    if (basis.rows() != bundle.dim || basis.cols() != bundle.dim) {
      throw ParseError("basis dimensions disagree with manifest: " + file, 1, 1);
    }
    bundle.bases.push_back(std::move(basis));
  }
  if (manifest.contains("angles")) {
    for (const auto& file : manifest["angles"].get<std::vector<std::string>>()) {
      bundle.angle_matrices.push_back(read_matrix_csv(directory / file));
    }
  }
  if (manifest.contains("reflections")) {
    bundle.reflections = manifest["reflections"].get<std::vector<std::vector<double>>>();
  }
  if (manifest.contains("sort_indices")) {
    bundle.sort_indices = manifest["sort_indices"].get<std::vector<std::vector<int>>>();
  }
  if (manifest.contains("participation_scores")) {
    bundle.participation_scores =
        manifest["participation_scores"].get<std::vector<std::vector<double>>>();
  }
  return bundle;
}

void write_series(const fs::path& directory, const SeriesBundle& bundle) {
  fs::create_directories(directory);

  json manifest;
  manifest["dim"] = bundle.dim;
  manifest["timestamps"] = bundle.timestamps;
  manifest["eigenvalues"] = bundle.eigenvalues;
  if (bundle.method) manifest["method"] = *bundle.method;
  if (bundle.records) manifest["records"] = *bundle.records;

  std::vector<std::string> basis_files;
  for (size_t t = 0; t < bundle.bases.size(); ++t) {
    const std::string file = snapshot_file("basis", t);
    write_matrix_csv(directory / file, bundle.bases[t]);
    basis_files.push_back(file);
  }
  manifest["bases"] = basis_files;

  if (!bundle.angle_matrices.empty()) {
    std::vector<std::string> angle_files;
    for (size_t t = 0; t < bundle.angle_matrices.size(); ++t) {
      const std::string file = snapshot_file("angles", t);
      write_matrix_csv(directory / file, bundle.angle_matrices[t]);
      angle_files.push_back(file);
    }
    manifest["angles"] = angle_files;
  }
  if (!bundle.reflections.empty()) manifest["reflections"] = bundle.reflections;
  if (!bundle.sort_indices.empty()) manifest["sort_indices"] = bundle.sort_indices;
  if (!bundle.participation_scores.empty())
    manifest["participation_scores"] = bundle.participation_scores;

  atomic_write_text(directory / kManifestName, manifest.dump(2) + "\n");
}

}  // namespace eigenorient
