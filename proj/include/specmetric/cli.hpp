#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "specmetric/divergence.hpp"
#include "specmetric/error.hpp"
#include "specmetric/estimation.hpp"
#include "specmetric/geodesic.hpp"
#include "specmetric/io.hpp"
#include "specmetric/prediction.hpp"
#include "specmetric/spectra.hpp"

namespace specmetric::cli {

inline constexpr std::size_t kDefaultGrid = 4096;

/// Bad flag combination detected after parsing; reported with exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A spectrum argument: either a PSD CSV file or an analytic form evaluated
/// on a chosen grid.
///
///   const:C           constant C
///   expcos:A          exp(A cos theta)
///   ar:a1,...,ap[@S]  S / |1 - sum_l a_l e^{-i l theta}|^2 (S defaults to 1)
struct SpectrumSource {
  std::string text;

  bool analytic() const {
    return text.starts_with("const:") || text.starts_with("expcos:") || text.starts_with("ar:");
  }
};

namespace detail {

inline double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  if (!specmetric::detail::parse_double(specmetric::detail::trim(text), v) || !std::isfinite(v)) {
    throw UsageError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

inline Psd evaluate_analytic(const std::string& text, const FrequencyGrid& grid) {
  const auto colon = text.find(':');
  const std::string_view kind = std::string_view(text).substr(0, colon);
  const std::string_view body = std::string_view(text).substr(colon + 1);
  if (kind == "const") {
    const double c = parse_number(body, "constant");
    return psd_from_function(grid, [c](double) { return c; });
  }
  if (kind == "expcos") {
    const double a = parse_number(body, "exponent scale");
    return psd_from_function(grid, [a](double theta) { return std::exp(a * std::cos(theta)); });
  }
  // ar:
  std::string_view coeff_text = body;
  double sigma2 = 1.0;
  if (const auto at = body.find('@'); at != std::string_view::npos) {
    coeff_text = body.substr(0, at);
    sigma2 = parse_number(body.substr(at + 1), "AR innovation variance");
  }
  std::vector<double> coeffs;
  if (!specmetric::detail::trim(coeff_text).empty()) {
    for (const auto field : specmetric::detail::split_fields(coeff_text)) {
      coeffs.push_back(parse_number(field, "AR coefficient"));
    }
  }
  return psd_from_ar(coeffs, sigma2, grid);
}

// Loads data files first, then evaluates analytic sources on the grid the
// files share (or on --grid, which data files must then match).
inline std::vector<Psd> load_spectra(const std::vector<SpectrumSource>& sources,
                                     std::optional<std::size_t> grid_flag) {
  std::vector<std::optional<Psd>> loaded(sources.size());
  std::optional<FrequencyGrid> grid;
  if (grid_flag) grid = FrequencyGrid(*grid_flag);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].analytic()) continue;
    loaded[i] = read_psd_csv(sources[i].text);
    if (!grid) {
      grid = loaded[i]->grid();
    } else if (!(loaded[i]->grid() == *grid)) {
      specmetric::detail::fail(
          ErrorKind::kInvalidGrid,
          sources[i].text + " has " + std::to_string(loaded[i]->grid().size()) + " nodes but the grid is " +
              std::to_string(grid->size()) + "; data files are never resampled");
    }
  }
  if (!grid) grid = FrequencyGrid(kDefaultGrid);
  std::vector<Psd> out;
  out.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    out.push_back(loaded[i] ? *loaded[i] : evaluate_analytic(sources[i].text, *grid));
  }
  return out;
}

inline std::optional<std::size_t> grid_option(std::size_t value, const CLI::Option* opt) {
  if (opt->count() == 0) return std::nullopt;
  return value;
}

}  // namespace detail

/// Runs one CLI invocation. args excludes the program name. Returns 0 on
/// success, 1 on domain or I/O errors, 2 on usage errors. Infinite results
/// are successes and print as "inf".
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic distances, divergences and geodesics between power spectral densities", "specmetric"};
  app.require_subcommand(1);

  std::size_t grid_n = kDefaultGrid;

  // dist
  auto* dist = app.add_subcommand("dist", "Distance or divergence between two spectra");
  std::string dist_a, dist_b, metric = "dg";
  double r = 0.0, s = 0.0;
  dist->add_option("f1", dist_a, "First spectrum (CSV file or analytic form)")->required();
  dist->add_option("f2", dist_b, "Second spectrum")->required();
  dist->add_option("--metric", metric, "dg | d | ag | sym | rs")
      ->check(CLI::IsMember({"dg", "d", "ag", "sym", "rs"}));
  auto* r_opt = dist->add_option("--r", r, "Larger power-mean order for --metric rs");
  auto* s_opt = dist->add_option("--s", s, "Smaller power-mean order for --metric rs");
  auto* dist_grid = dist->add_option("--grid", grid_n, "Grid size for analytic spectra")->check(CLI::Range(2, 1 << 24));

  // geodesic
  auto* geo = app.add_subcommand("geodesic", "Points on the logarithmic geodesic between two spectra");
  std::string geo_a, geo_b, geo_out;
  double tau = 0.0;
  std::size_t steps = 0;
  geo->add_option("f1", geo_a, "Start spectrum")->required();
  geo->add_option("f2", geo_b, "End spectrum")->required();
  auto* tau_opt = geo->add_option("--tau", tau, "Single point at tau in [0, 1]");
  auto* steps_opt = geo->add_option("--steps", steps, "Number of uniformly spaced path points (>= 2)");
  auto* geo_out_opt = geo->add_option("--out", geo_out, "Output directory (--steps) or file (--tau)");
  auto* geo_grid = geo->add_option("--grid", grid_n, "Grid size for analytic spectra")->check(CLI::Range(2, 1 << 24));

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Pairwise geodesic distance matrix");
  std::vector<std::string> matrix_files;
  std::string matrix_out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  matrix->add_option("files", matrix_files, "PSD CSV files")->required();
  matrix->add_option("--out", matrix_out, "Output CSV (default: standard output)");
  matrix->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate a PSD from a time series");
  std::string ts_path, method, window_name = "hann", est_out;
  std::size_t segment = 256;
  double overlap = 0.5;
  estimate->add_option("series", ts_path, "Time-series CSV")->required();
  estimate->add_option("--method", method, "periodogram | welch")
      ->required()
      ->check(CLI::IsMember({"periodogram", "welch"}));
  auto* segment_opt = estimate->add_option("--segment", segment, "Welch segment length");
  auto* overlap_opt = estimate->add_option("--overlap", overlap, "Welch overlap fraction in [0, 1)");
  auto* window_opt = estimate->add_option("--window", window_name, "rectangular | hann")
                         ->check(CLI::IsMember({"rectangular", "hann"}));
  estimate->add_option("--grid", grid_n, "Grid size")->check(CLI::Range(2, 1 << 24));
  estimate->add_option("--out", est_out, "Output PSD CSV (default: standard output)");

  // classify
  auto* cls = app.add_subcommand("classify", "Report whether a spectrum is strictly positive on its grid");
  std::string cls_path;
  cls->add_option("f", cls_path, "Spectrum")->required();
  auto* cls_grid = cls->add_option("--grid", grid_n, "Grid size for analytic spectra")->check(CLI::Range(2, 1 << 24));

  // rho
  auto* rho = app.add_subcommand("rho", "Prediction-error degradation ratio");
  std::string rho_a, rho_b, oracle = "formula";
  std::size_t order = 64;
  rho->add_option("f1", rho_a, "Spectrum of the predicted process")->required();
  rho->add_option("f2", rho_b, "Spectrum the predictor is designed for")->required();
  rho->add_option("--order", order, "Predictor order for --oracle levinson")->check(CLI::PositiveNumber);
  rho->add_option("--oracle", oracle, "formula | levinson")->check(CLI::IsMember({"formula", "levinson"}));
  auto* rho_grid = rho->add_option("--grid", grid_n, "Grid size for analytic spectra")->check(CLI::Range(2, 1 << 24));

  std::vector<const char*> argv;
  argv.push_back("specmetric");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dist->parsed()) {
      const bool has_rs = r_opt->count() > 0 || s_opt->count() > 0;
      if (metric == "rs") {
        if (r_opt->count() == 0 || s_opt->count() == 0) throw UsageError("--metric rs requires --r and --s");
        if (r == 0.0 || s == 0.0) throw UsageError("--r and --s must be nonzero");
        if (!(r > s)) throw UsageError("--metric rs requires r > s");
      } else if (has_rs) {
        throw UsageError("--r/--s only apply to --metric rs");
      }
      const auto spectra = detail::load_spectra({{dist_a}, {dist_b}}, detail::grid_option(grid_n, dist_grid));
      const Psd& f1 = spectra[0];
      const Psd& f2 = spectra[1];
      if (metric == "dg") {
        out << format_distance(geodesic_distance(f1, f2)) << '\n';
      } else if (metric == "d") {
        out << format_distance(scaled_metric_d(f1, f2)) << '\n';
      } else if (metric == "ag") {
        out << format_distance(divergence_ag(f1, f2)) << '\n';
      } else if (metric == "sym") {
        out << format_distance(divergence_sym(f1, f2)) << '\n';
      } else {
        out << format_distance(divergence_rs(f1, f2, r, s)) << '\n';
      }
    } else if (geo->parsed()) {
      const bool by_tau = tau_opt->count() > 0;
      const bool by_steps = steps_opt->count() > 0;
      if (by_tau == by_steps) throw UsageError("geodesic needs exactly one of --tau or --steps");
      if (by_steps && geo_out_opt->count() == 0) throw UsageError("--steps requires --out DIR");
      if (by_steps && steps < 2) throw UsageError("--steps must be at least 2");
      if (by_tau && !(tau >= 0.0 && tau <= 1.0)) throw UsageError("--tau must lie in [0, 1]");
      const auto spectra = detail::load_spectra({{geo_a}, {geo_b}}, detail::grid_option(grid_n, geo_grid));
      if (by_tau) {
        const Psd point = geodesic_point(spectra[0], spectra[1], tau);
        if (geo_out_opt->count() > 0) {
          write_psd_csv(point, std::filesystem::path(geo_out));
        } else {
          write_psd_csv(point, out);
        }
      } else {
        const GeodesicPath path = geodesic_path(spectra[0], spectra[1], steps);
        write_geodesic_path(path, geo_out);
        out << format_number(path_length(path), 12) << '\n';
      }
    } else if (matrix->parsed()) {
      std::vector<std::string> labels;
      std::vector<Psd> spectra;
      for (const auto& file : matrix_files) {
        labels.push_back(std::filesystem::path(file).stem().string());
        spectra.push_back(read_psd_csv(file));
      }
      const DistanceMatrix m = build_distance_matrix(std::move(labels), spectra, threads);
      if (matrix_out.empty()) {
        write_distance_matrix_csv(m, out);
      } else {
        write_distance_matrix_csv(m, std::filesystem::path(matrix_out));
      }
    } else if (estimate->parsed()) {
      if (method == "periodogram" &&
          (segment_opt->count() > 0 || overlap_opt->count() > 0 || window_opt->count() > 0)) {
        throw UsageError("--segment/--overlap/--window only apply to --method welch");
      }
      const TimeSeries ts = read_time_series_csv(ts_path);
      const FrequencyGrid grid(grid_n);
      const Psd psd = method == "periodogram"
                          ? periodogram(ts, grid)
                          : welch(ts, segment, overlap, window_name == "hann" ? Window::kHann : Window::kRectangular,
                                  grid);
      if (est_out.empty()) {
        write_psd_csv(psd, out);
      } else {
        write_psd_csv(psd, std::filesystem::path(est_out));
      }
    } else if (cls->parsed()) {
      const auto spectra = detail::load_spectra({{cls_path}}, detail::grid_option(grid_n, cls_grid));
      out << to_string(classify(spectra[0])) << '\n';
    } else if (rho->parsed()) {
      const auto spectra = detail::load_spectra({{rho_a}, {rho_b}}, detail::grid_option(grid_n, rho_grid));
      if (oracle == "formula") {
        out << format_distance(prediction_ratio(spectra[0], spectra[1])) << '\n';
      } else {
        out << format_number(rho_empirical(spectra[0], spectra[1], order), 12) << '\n';
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace specmetric::cli
