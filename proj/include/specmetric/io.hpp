#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "specmetric/divergence.hpp"
#include "specmetric/error.hpp"
#include "specmetric/estimation.hpp"
#include "specmetric/geodesic.hpp"
#include "specmetric/grid.hpp"
#include "specmetric/spectra.hpp"

namespace specmetric {

/// %.{digits}g formatting; infinity prints as the literal "inf".
inline std::string format_number(double v, int digits) {
  if (std::isinf(v) && v > 0) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline std::string format_distance(const DistanceResult& d) { return format_number(d.as_double(), 12); }
inline std::string format_distance(const ExtendedReal& d) { return format_number(d.as_double(), 12); }

namespace detail {

inline std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string() + " for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorKind::kIo, "write to " + path.string() + " failed");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PSD files: header "theta,psd", one row per grid node, theta ascending from
// -pi with uniform spacing 2pi/n.

inline void write_psd_csv(const Psd& f, std::ostream& out) {
  out << "theta,psd\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    out << format_number(f.grid().node(k), 17) << ',' << format_number(f[k], 17) << '\n';
  }
}

inline void write_psd_csv(const Psd& f, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  write_psd_csv(f, out);
  detail::finish_write(out, path);
}

inline Psd read_psd_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || detail::trim(lines[0]) != "theta,psd") {
    detail::fail(ErrorKind::kParse, detail::location(path, 1) + ": expected header 'theta,psd'");
  }
  std::vector<double> thetas;
  std::vector<double> values;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (detail::trim(lines[i]).empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    double theta = 0.0;
    double value = 0.0;
    if (fields.size() != 2 || !detail::parse_double(fields[0], theta) ||
        !detail::parse_double(fields[1], value) || !std::isfinite(theta) || !std::isfinite(value)) {
      detail::fail(ErrorKind::kParse, detail::location(path, line_no) + ": malformed row '" + lines[i] + "'");
    }
    if (value < 0.0) {
      detail::fail(ErrorKind::kConeViolation,
                   detail::location(path, line_no) + ": negative spectral value " + format_number(value, 17));
    }
    thetas.push_back(theta);
    values.push_back(value);
  }
  if (thetas.size() < 2) {
    detail::fail(ErrorKind::kInvalidGrid, path.string() + ": need at least 2 rows, found " +
                                              std::to_string(thetas.size()));
  }
  const FrequencyGrid grid(thetas.size());
  const double h = grid.spacing();
  if (std::abs(thetas[0] + std::numbers::pi) > 1e-9 * h) {
    detail::fail(ErrorKind::kInvalidGrid, detail::location(path, 2) + ": first theta must be -pi");
  }
  for (std::size_t k = 1; k < thetas.size(); ++k) {
    if (std::abs((thetas[k] - thetas[k - 1]) - h) > 1e-9 * h) {
      detail::fail(ErrorKind::kInvalidGrid, detail::location(path, k + 2) +
                                                ": theta spacing is not uniform 2*pi/" +
                                                std::to_string(thetas.size()));
    }
  }
  try {
    return Psd(grid, std::move(values));
  } catch (const Error& e) {
    detail::fail(e.kind(), path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Time series files: header "t,value" or "value"; the last column is read.

inline TimeSeries read_time_series_csv(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty()) detail::fail(ErrorKind::kParse, detail::location(path, 1) + ": empty file");
  const auto header = detail::trim(lines[0]);
  std::size_t columns = 0;
  if (header == "t,value") {
    columns = 2;
  } else if (header == "value") {
    columns = 1;
  } else {
    detail::fail(ErrorKind::kParse, detail::location(path, 1) + ": expected header 't,value' or 'value'");
  }
  std::vector<double> samples;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    double v = 0.0;
    if (fields.size() != columns || !detail::parse_double(fields.back(), v) || !std::isfinite(v)) {
      detail::fail(ErrorKind::kParse, detail::location(path, i + 1) + ": malformed row '" + lines[i] + "'");
    }
    samples.push_back(v);
  }
  try {
    return TimeSeries(std::move(samples), path.stem().string());
  } catch (const Error& e) {
    detail::fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

inline void write_time_series_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  out << "t,value\n";
  for (std::size_t t = 0; t < ts.size(); ++t) out << t << ',' << format_number(ts.samples()[t], 17) << '\n';
  detail::finish_write(out, path);
}

// ---------------------------------------------------------------------------
// Distance matrices.

class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<std::string> labels, std::vector<DistanceResult> entries)
      : labels_(std::move(labels)), entries_(std::move(entries)) {
    const std::size_t n = labels_.size();
    detail::require(entries_.size() == n * n, "distance matrix entry count does not match labels");
    for (std::size_t i = 0; i < n; ++i) {
      detail::require(at(i, i) == DistanceResult::finite(0.0), "distance matrix diagonal must be zero");
      for (std::size_t j = 0; j < i; ++j) {
        detail::require(at(i, j) == at(j, i), "distance matrix must be symmetric");
      }
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const DistanceResult& at(std::size_t i, std::size_t j) const { return entries_[i * labels_.size() + j]; }

 private:
  std::vector<std::string> labels_;
  std::vector<DistanceResult> entries_;
};

/// Pairwise geodesic distances, one evaluation per unordered pair. Pairs are
/// distributed over `threads` workers; each pair owns its output slots, so
/// the result does not depend on scheduling.
inline DistanceMatrix build_distance_matrix(std::vector<std::string> labels, const std::vector<Psd>& spectra,
                                            unsigned threads = 1) {
  const std::size_t n = spectra.size();
  detail::require(labels.size() == n, "one label per spectrum required");
  for (std::size_t i = 1; i < n; ++i) detail::require_same_grid(spectra[0], spectra[i]);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<DistanceResult> entries(n * n, DistanceResult::finite(0.0));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next.fetch_add(1); idx < pairs.size(); idx = next.fetch_add(1)) {
      const auto [i, j] = pairs[idx];
      const DistanceResult d = geodesic_distance(spectra[i], spectra[j]);
      entries[i * n + j] = d;
      entries[j * n + i] = d;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pairs.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return DistanceMatrix(std::move(labels), std::move(entries));
}

/// Label row and column, 12 significant digits, "inf" for Infinite.
inline void write_distance_matrix_csv(const DistanceMatrix& m, std::ostream& out) {
  for (const auto& label : m.labels()) out << ',' << label;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.labels()[i];
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << format_distance(m.at(i, j));
    out << '\n';
  }
}

inline void write_distance_matrix_csv(const DistanceMatrix& m, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  write_distance_matrix_csv(m, out);
  detail::finish_write(out, path);
}

// ---------------------------------------------------------------------------
// Geodesic paths: a directory holding one PSD file per point plus index.csv
// with rows "index,tau,file".

inline std::string geodesic_point_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "point_%04zu.csv", index);
  return buf;
}

inline void write_geodesic_path(const GeodesicPath& path, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) detail::fail(ErrorKind::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
  const auto index_path = dir / "index.csv";
  auto index = detail::open_for_write(index_path);
  index << "index,tau,file\n";
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const std::string name = geodesic_point_filename(i);
    write_psd_csv(path.points[i], dir / name);
    index << i << ',' << format_number(path.taus[i], 17) << ',' << name << '\n';
  }
  detail::finish_write(index, index_path);
}

inline GeodesicPath read_geodesic_path(const std::filesystem::path& dir) {
  const auto index_path = dir / "index.csv";
  const auto lines = detail::read_lines(index_path);
  if (lines.empty() || detail::trim(lines[0]) != "index,tau,file") {
    detail::fail(ErrorKind::kParse, detail::location(index_path, 1) + ": expected header 'index,tau,file'");
  }
  GeodesicPath path;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (detail::trim(lines[i]).empty()) continue;
    const auto fields = detail::split_fields(lines[i]);
    double tau = 0.0;
    if (fields.size() != 3 || !detail::parse_double(fields[1], tau)) {
      detail::fail(ErrorKind::kParse, detail::location(index_path, i + 1) + ": malformed row '" + lines[i] + "'");
    }
    path.taus.push_back(tau);
    path.points.push_back(read_psd_csv(dir / std::string(fields[2])));
  }
  if (path.points.size() < 2) detail::fail(ErrorKind::kParse, index_path.string() + ": path has fewer than 2 points");
  return path;
}

}  // namespace specmetric
