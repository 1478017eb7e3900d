// Command-line front end: orient eigensystems or panels, stabilize series,
// classify modes against the Marchenko-Pastur law, reconstruct correlation
// matrices, and emit deterministic synthetic fixtures.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigenorient/correlation.hpp"
#include "eigenorient/dirstats.hpp"
#include "eigenorient/eigensolver.hpp"
#include "eigenorient/errors.hpp"
#include "eigenorient/io.hpp"
#include "eigenorient/orientation.hpp"
#include "eigenorient/rmt.hpp"
#include "eigenorient/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eigenorient;

namespace {

enum class LogLevel { none = 0, error = 1, warn = 2, info = 3, debug = 4 };

LogLevel g_log_level = LogLevel::warn;

LogLevel log_level_from_env() {
  const char* raw = std::getenv("EIGENORIENT_LOG");
  if (raw == nullptr) return LogLevel::warn;
  const std::string value(raw);
  if (value == "none") return LogLevel::none;
  if (value == "error") return LogLevel::error;
  if (value == "warn") return LogLevel::warn;
  if (value == "info") return LogLevel::info;
  if (value == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

void log_at(LogLevel level, const char* tag, const std::string& message) {
  if (g_log_level >= level) std::cerr << "[" << tag << "] " << message << "\n";
}

void log_info(const std::string& message) { log_at(LogLevel::info, "info", message); }
void log_debug(const std::string& message) { log_at(LogLevel::debug, "debug", message); }

struct CommonOptions {
  std::string input;
  std::string output;
  std::string method = "arctan2";
  bool first_orthant = false;
  double ortho_tol = kEigenSystemOrthoTol;
  double zero_tol = kStructuralZeroTol;
};

OrientOptions to_orient_options(const CommonOptions& common) {
  OrientOptions options;
  options.method = method_from_name(common.method);
  options.orient_to_first_orthant = common.first_orthant;
  options.ortho_tol = common.ortho_tol;
  options.zero_tol = common.zero_tol;
  return options;
}

std::vector<EigenSystem> bundle_to_systems(const SeriesBundle& bundle) {
  std::vector<EigenSystem> systems;
  systems.reserve(bundle.bases.size());
  for (size_t t = 0; t < bundle.bases.size(); ++t) {
    systems.push_back(EigenSystem{bundle.bases[t], bundle.eigenvalues[t]});
  }
  return systems;
}

/// Loads either a panel CSV (one snapshot, eigendecomposed here) or an
/// eigenseries directory.
std::pair<std::vector<EigenSystem>, std::vector<double>> load_input(
    const fs::path& input, std::optional<int>* records_out = nullptr) {
  if (fs::is_directory(input)) {
    SeriesBundle bundle = read_series(input);
    if (records_out != nullptr) *records_out = bundle.records;
    return {bundle_to_systems(bundle), bundle.timestamps};
  }
  const Matrix panel = read_panel_csv(input);
  log_info("panel: " + std::to_string(panel.rows()) + " records x " +
           std::to_string(panel.cols()) + " features");
  const Matrix corr = sample_correlation(panel);
  EigenDecomposition eig = symmetric_eigen(corr);
  if (records_out != nullptr) *records_out = panel.rows();
  std::vector<EigenSystem> systems;
  systems.push_back(EigenSystem{std::move(eig.eigenvectors), std::move(eig.eigenvalues)});
  return {std::move(systems), {0.0}};
}

SeriesBundle series_to_bundle(const EigenSeries& series) {
  SeriesBundle bundle;
  bundle.dim = series.dim();
  bundle.timestamps = series.timestamps;
  bundle.method = method_name(series.method());
  for (const auto& snap : series.snapshots) {
    bundle.eigenvalues.push_back(snap.sorted_eigenvalues);
    bundle.bases.push_back(snap.oriented_basis);
    bundle.angle_matrices.push_back(snap.angles.dense());
    bundle.reflections.push_back(snap.reflections.signs);
    bundle.sort_indices.push_back(snap.sort_indices);
    std::vector<double> scores;
    for (int j = 0; j < bundle.dim; ++j) {
      scores.push_back(participation_score(snap.oriented_basis.column(j)));
    }
    bundle.participation_scores.push_back(std::move(scores));
  }
  return bundle;
}

int cmd_orient(const CommonOptions& common) {
  std::optional<int> records;
  auto [systems, timestamps] = load_input(common.input, &records);
  EigenSeries series = orient_series(systems, timestamps, to_orient_options(common));
  SeriesBundle bundle = series_to_bundle(series);
  bundle.records = records;  // lets classify find T downstream
  write_series(common.output, bundle);
  log_info("oriented " + std::to_string(series.snapshots.size()) + " snapshot(s) -> " +
           common.output);
  return 0;
}

int cmd_synth(const std::string& output, std::uint64_t seed, int dim, int directed, double sigma,
              int length, const std::string& parity) {
  WobbleSpec spec;
  spec.dim = dim;
  spec.directed_modes = directed;
  spec.angle_noise_sigma = sigma;
  spec.series_length = length;
  spec.seed = seed;
  spec.base_angles = wobble_fixture_base(dim, directed);
  if (parity == "even") {
    spec.reflection_parity = WobbleSpec::Parity::even;
  } else if (parity == "odd") {
    spec.reflection_parity = WobbleSpec::Parity::odd;
  } else {
    throw std::invalid_argument("synth: parity must be 'even' or 'odd'");
  }

  SynthSeries series = wobble_series(spec);
  SeriesBundle bundle;
  bundle.dim = dim;
  bundle.timestamps = series.timestamps;
  for (const auto& snap : series.snapshots) {
    bundle.eigenvalues.push_back(snap.eigenvalues);
    bundle.bases.push_back(snap.basis);
  }
  write_series(output, bundle);
  log_info("wrote synthetic series of length " + std::to_string(length) + " -> " + output);
  return 0;
}

int cmd_stabilize(const CommonOptions& common, const std::vector<double>& kernel_weights,
                  std::optional<int> informative, const std::string& static_order) {
  if (kernel_weights.empty())
    throw std::invalid_argument("stabilize: --kernel is required");
  // The raw weights keep the mean lag exact; eigenvalue filtering
  // normalizes internally and the report shows the normalized form.
  FilterKernel kernel = FilterKernel::from_weights(kernel_weights);

  auto [systems, timestamps] = load_input(common.input);
  const OrientOptions options = to_orient_options(common);
  EigenSeries series = orient_series(systems, timestamps, options);
  const int n = series.dim();

  if (static_cast<int>(series.snapshots.size()) < static_cast<int>(kernel.weights.size()))
    throw std::invalid_argument("stabilize: series shorter than the kernel");
  if (informative && (*informative < 0 || *informative > n - 1))
    throw std::invalid_argument("stabilize: --informative out of range");
  if (static_order != "before" && static_order != "after")
    throw std::invalid_argument("stabilize: --static-order must be 'before' or 'after'");

  // Raw first angles, for the wobble summary.
  std::vector<std::vector<double>> raw_first_angles(static_cast<size_t>(n - 1));
  for (const auto& snap : series.snapshots) {
    for (int k = 0; k < n - 1; ++k)
      raw_first_angles[static_cast<size_t>(k)].push_back(snap.angles(k, k + 1));
  }

  if (informative && static_order == "before") {
    // Pin the noise modes of every snapshot before any filtering.
    for (auto& snap : series.snapshots) {
      snap.angles = static_stabilize(snap.angles, *informative);
      snap.oriented_basis = generate_oriented_eigenvectors(snap.angles);
    }
  }

  StabilizedSeries stable = filter_eigenbases(series, kernel, options.method);

  SeriesBundle bundle;
  bundle.dim = n;
  bundle.timestamps = stable.timestamps;
  bundle.method = method_name(options.method);
  bundle.eigenvalues = stable.eigenvalues;
  bundle.bases = stable.bases;
  for (const auto& angles : stable.angle_matrices) bundle.angle_matrices.push_back(angles.dense());
  write_series(common.output, bundle);

  if (informative && static_order == "after") {
    SeriesBundle modal;
    modal.dim = n;
    modal.timestamps = stable.timestamps;
    modal.method = method_name(options.method);
    modal.eigenvalues = stable.eigenvalues;
    for (const auto& angles : stable.angle_matrices) {
      AngleMatrix pinned = static_stabilize(angles, *informative);
      modal.bases.push_back(generate_oriented_eigenvectors(pinned));
      modal.angle_matrices.push_back(pinned.dense());
    }
    write_series(fs::path(common.output) / "modal", modal);
  }

  // Summary: dispersion of each subspace's first angle, raw vs filtered.
  std::vector<double> raw_cv;
  std::vector<double> filtered_cv;
  std::vector<bool> reduced;
  for (int k = 0; k < n - 1; ++k) {
    std::vector<double> filtered_angles;
    for (const auto& angles : stable.angle_matrices)
      filtered_angles.push_back(angles(k, k + 1));
    raw_cv.push_back(circular_variance(raw_first_angles[static_cast<size_t>(k)]));
    filtered_cv.push_back(circular_variance(filtered_angles));
    reduced.push_back(filtered_cv.back() < raw_cv.back());
  }

  json report;
  report["delay"] = stable.delay;
  report["kernel"] = kernel.normalized_copy().weights;
  report["windows"] = stable.bases.size();
  report["static_order"] = static_order;
  if (informative) report["informative"] = *informative;
  report["first_angle_circular_variance_raw"] = raw_cv;
  report["first_angle_circular_variance_filtered"] = filtered_cv;
  report["dispersion_reduced"] = reduced;
  atomic_write_text(fs::path(common.output) / "stabilize_report.json", report.dump(2) + "\n");

  log_info("stabilized " + std::to_string(stable.bases.size()) + " window(s), delay " +
           format_double(stable.delay) + " sample(s)");
  return 0;
}

int cmd_classify(const CommonOptions& common, std::optional<int> records_flag,
                 double edge_multiplier, int density_grid) {
  std::optional<int> records_manifest;
  auto [systems, timestamps] = load_input(common.input, &records_manifest);
  const std::optional<int> records = records_flag ? records_flag : records_manifest;
  if (!records)
    throw std::invalid_argument("classify: record count unavailable; pass --records");

  fs::create_directories(common.output);
  json report;
  report["records"] = *records;
  report["edge_multiplier"] = edge_multiplier;
  json snapshots = json::array();
  std::vector<int> informative_counts;

  for (size_t t = 0; t < systems.size(); ++t) {
    std::vector<double> spectrum = systems[t].eigenvalues;
    std::sort(spectrum.begin(), spectrum.end(), std::greater<double>());
    ModeClassification modes = classify_modes(spectrum, *records, edge_multiplier);
    informative_counts.push_back(static_cast<int>(modes.informative.size()));

    json snap;
    snap["timestamp"] = timestamps[t];
    snap["informative"] = modes.informative;
    snap["noise"] = modes.noise;
    json steps = json::array();
    for (const auto& model : modes.models) {
      steps.push_back({{"q", model.q},
                       {"lambda_minus", model.lambda_minus},
                       {"lambda_plus", model.lambda_plus},
                       {"lambda_bar", model.lambda_bar}});
    }
    snap["steps"] = steps;
    snapshots.push_back(snap);

    if (density_grid > 1) {
      const MPModel& model = modes.models.back();
      const double lo = model.lambda_bar * model.lambda_minus;
      const double hi = model.lambda_bar * model.lambda_plus;
      std::string csv;
      for (int g = 0; g < density_grid; ++g) {
        const double lambda =
            lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(density_grid - 1);
        const double rho = rescaled_mp_density(lambda, model.q, model.lambda_bar);
        csv += format_double(lambda);
        csv += ',';
        csv += format_double(rho);
        csv += '\n';
      }
      char name[32];
      std::snprintf(name, sizeof(name), "density_%04zu.csv", t);
      atomic_write_text(fs::path(common.output) / name, csv);
    }
    log_debug("snapshot " + std::to_string(t) + ": " +
              std::to_string(modes.informative.size()) + " informative mode(s)");
  }
  report["snapshots"] = snapshots;
  report["informative_counts"] = informative_counts;
  atomic_write_text(fs::path(common.output) / "classify_report.json", report.dump(2) + "\n");
  return 0;
}

int cmd_corr(const CommonOptions& common, std::optional<double> alpha,
             std::optional<int> informative) {
  if (alpha.has_value() != informative.has_value())
    throw std::invalid_argument("corr: --alpha and --informative must be given together");

  auto [systems, timestamps] = load_input(common.input);
  EigenSeries series = orient_series(systems, timestamps, to_orient_options(common));

  fs::create_directories(common.output);
  std::vector<Matrix> correlations;
  for (size_t t = 0; t < series.snapshots.size(); ++t) {
    const auto& snap = series.snapshots[t];
    correlations.push_back(reconstruct_correlation(snap.oriented_basis, snap.sorted_eigenvalues));
    char name[32];
    std::snprintf(name, sizeof(name), "corr_%04zu.csv", t);
    write_matrix_csv(fs::path(common.output) / name, correlations.back());

    if (alpha) {
      const Matrix shrunk =
          shrink_noise_subspace(snap, snap.sorted_eigenvalues, *informative, *alpha);
      std::snprintf(name, sizeof(name), "shrunk_%04zu.csv", t);
      write_matrix_csv(fs::path(common.output) / name, shrunk);
    }
  }

  const DispersionReport dispersion = dispersion_report(correlations);
  json report;
  report["dim"] = dispersion.dim;
  report["samples"] = dispersion.samples;
  report["single_sample"] = dispersion.single_sample;
  if (alpha) {
    report["alpha"] = *alpha;
    report["informative"] = *informative;
  }
  json entries = json::array();
  for (const auto& entry : dispersion.entries) {
    entries.push_back({{"i", entry.i},
                       {"j", entry.j},
                       {"min", entry.min},
                       {"max", entry.max},
                       {"mean", entry.mean},
                       {"stdev", entry.stdev}});
  }
  report["entries"] = entries;
  atomic_write_text(fs::path(common.output) / "dispersion.json", report.dump(2) + "\n");
  log_info("reconstructed " + std::to_string(correlations.size()) + " correlation matrix(es)");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_log_level = log_level_from_env();

  CLI::App app{"Consistently oriented eigenanalysis toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  std::vector<double> kernel_weights;
  std::optional<int> informative;
  std::optional<double> alpha;
  std::optional<int> records;
  double edge_multiplier = 1.0;
  int density_grid = 0;
  std::string static_order = "after";
  std::uint64_t seed = 0;
  int dim = 7;
  int directed = 3;
  double sigma = 0.2;
  int length = 40;
  std::string parity = "even";

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("--input", common.input, "Input panel CSV or eigenseries directory")
          ->required();
    cmd->add_option("--output", common.output, "Output directory")->required();
    return cmd;
  };
  auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", common.method, "Orientation method: arcsin or arctan2")
        ->check(CLI::IsMember({"arcsin", "arctan2"}))
        ->capture_default_str();
    cmd->add_option("--ortho-tol", common.ortho_tol, "Orthonormality tolerance for inputs")
        ->capture_default_str();
    cmd->add_option("--zero-tol", common.zero_tol, "Relative structural-zero threshold")
        ->capture_default_str();
  };

  CLI::App* orient = app.add_subcommand("orient", "Orient eigensystems or a data panel");
  add_common(orient, true);
  add_method(orient);
  orient->add_flag("--first-orthant", common.first_orthant,
                   "Reflect the leading eigenvector into the first orthant");

  CLI::App* stabilize =
      app.add_subcommand("stabilize", "Filter an eigenseries and pin noise-mode angles");
  add_common(stabilize, true);
  add_method(stabilize);
  stabilize->add_option("--kernel", kernel_weights, "Filter weights w1,w2,... (normalized here)")
      ->delimiter(',')
      ->required();
  stabilize->add_option("--informative", informative, "Informative mode count for static pinning");
  stabilize->add_option("--static-order", static_order,
                        "Apply static pinning 'before' or 'after' the filter")
      ->check(CLI::IsMember({"before", "after"}))
      ->capture_default_str();

  CLI::App* classify =
      app.add_subcommand("classify", "Split modes into informative vs sampling noise");
  add_common(classify, true);
  classify->add_option("--records", records, "Panel record count T backing the eigenvalues");
  classify->add_option("--edge-multiplier", edge_multiplier,
                       "Conservatism factor on the upper edge")
      ->capture_default_str();
  classify->add_option("--density-grid", density_grid,
                       "Emit this many density samples per snapshot");

  CLI::App* corr = app.add_subcommand("corr", "Reconstruct correlation matrices and dispersion");
  add_common(corr, true);
  add_method(corr);
  corr->add_option("--alpha", alpha, "Shrinkage weight in [0,1] for the noise block");
  corr->add_option("--informative", informative, "Informative mode count for shrinkage");

  CLI::App* synth = app.add_subcommand("synth", "Write a deterministic wobble fixture");
  add_common(synth, false);
  synth->add_option("--seed", seed, "PRNG seed")->required();
  synth->add_option("--dim", dim, "Dimension")->capture_default_str();
  synth->add_option("--directed", directed, "Directed (informative) mode count")
      ->capture_default_str();
  synth->add_option("--sigma", sigma, "Wobble noise, radians")->capture_default_str();
  synth->add_option("--length", length, "Series length")->capture_default_str();
  synth->add_option("--parity", parity, "Reflection parity: even or odd")
      ->check(CLI::IsMember({"even", "odd"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (orient->parsed()) return cmd_orient(common);
    if (stabilize->parsed()) return cmd_stabilize(common, kernel_weights, informative, static_order);
    if (classify->parsed()) return cmd_classify(common, records, edge_multiplier, density_grid);
    if (corr->parsed()) return cmd_corr(common, alpha, informative);
    if (synth->parsed()) return cmd_synth(common.output, seed, dim, directed, sigma, length, parity);
  } catch (const ParseError& e) {
    std::cerr << "parse error (line " << e.line() << ", column " << e.column() << "): " << e.what()
              << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
