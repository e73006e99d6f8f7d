#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "specmetric/divergence.hpp"
#include "specmetric/error.hpp"
#include "specmetric/spectra.hpp"

namespace specmetric {

/// Point f0^(1-tau) * f1^tau on the logarithmic interval between f0 and f1.
/// Shared zeros stay zero; tau = 0 and tau = 1 return the endpoints exactly.
inline Psd geodesic_point(const Psd& f0, const Psd& f1, double tau) {
  detail::require_same_grid(f0, f1);
  detail::require(tau >= 0.0 && tau <= 1.0,
                  "tau must lie in [0, 1], got " + std::to_string(tau));
  if (f0.zero_set() != f1.zero_set()) {
    detail::fail(ErrorKind::kNoFiniteGeodesic,
                 "endpoints have different zero sets and lie at infinite distance");
  }
  if (tau == 0.0) return f0;
  if (tau == 1.0) return f1;
  std::vector<double> out(f0.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (f0[k] == 0.0) {
      out[k] = 0.0;
    } else {
      out[k] = std::exp((1.0 - tau) * std::log(f0[k]) + tau * std::log(f1[k]));
    }
  }
  return Psd(f0.grid(), std::move(out));
}

struct GeodesicPath {
  std::vector<double> taus;
  std::vector<Psd> points;

  const Psd& start() const { return points.front(); }
  const Psd& end() const { return points.back(); }
};

/// m points at uniformly spaced tau = k/(m-1). The logarithmic
/// parametrization is already proportional to arc length.
inline GeodesicPath geodesic_path(const Psd& f0, const Psd& f1, std::size_t m) {
  detail::require(m >= 2, "a geodesic path needs at least 2 points");
  GeodesicPath path;
  path.taus.reserve(m);
  path.points.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double tau = (k + 1 == m) ? 1.0 : static_cast<double>(k) / static_cast<double>(m - 1);
    path.taus.push_back(tau);
    path.points.push_back(geodesic_point(f0, f1, tau));
  }
  return path;
}

/// Sum of geodesic distances between consecutive points.
inline double path_length(const GeodesicPath& path) {
  detail::require(path.points.size() >= 2, "a path needs at least 2 points");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const DistanceResult seg = geodesic_distance(path.points[i], path.points[i + 1]);
    if (seg.is_infinite()) {
      detail::fail(ErrorKind::kNoFiniteGeodesic,
                   "path segment " + std::to_string(i) + " has infinite length");
    }
    total += seg.value();
  }
  return total;
}

}  // namespace specmetric
