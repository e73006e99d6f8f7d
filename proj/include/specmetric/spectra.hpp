#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specmetric/error.hpp"
#include "specmetric/grid.hpp"

namespace specmetric {

/// Power spectral density sampled on a FrequencyGrid.
///
/// Values are nonnegative, finite and not all zero. Indices holding an exact
/// zero are recorded in zero_set(); no threshold is applied, since a tiny
/// positive value gives a large but finite distance while an exact zero makes
/// log-ratios non-square-integrable.
class Psd {
 public:
  Psd(FrequencyGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    detail::require(values_.size() == grid_.size(),
                    "PSD has " + std::to_string(values_.size()) + " values for a grid of " +
                        std::to_string(grid_.size()));
    bool any_positive = false;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      const double v = values_[k];
      if (!std::isfinite(v) || v < 0.0) {
        detail::fail(ErrorKind::kInvalidArgument,
                     "PSD value at index " + std::to_string(k) + " is not a finite nonnegative number");
      }
      if (v == 0.0) {
        zero_set_.push_back(k);
      } else {
        any_positive = true;
      }
    }
    detail::require(any_positive, "PSD is identically zero");
  }

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  std::size_t size() const noexcept { return values_.size(); }

  const std::vector<std::size_t>& zero_set() const noexcept { return zero_set_; }
  bool strictly_positive() const noexcept { return zero_set_.empty(); }

  /// kappa * f for kappa > 0: the same spectral ray.
  Psd scaled(double kappa) const {
    detail::require(kappa > 0.0 && std::isfinite(kappa), "scale factor must be positive and finite");
    std::vector<double> v(values_);
    for (double& x : v) x *= kappa;
    return Psd(grid_, std::move(v));
  }

  friend bool operator==(const Psd& a, const Psd& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  FrequencyGrid grid_;
  std::vector<double> values_;
  std::vector<std::size_t> zero_set_;
};

inline Psd psd_from_samples(const FrequencyGrid& grid, std::vector<double> values) {
  return Psd(grid, std::move(values));
}

/// Evaluates fn at every grid node and wraps the result as a Psd.
template <typename Fn>
Psd psd_from_function(const FrequencyGrid& grid, Fn&& fn) {
  return Psd(grid, sample(grid, std::forward<Fn>(fn)));
}

/// Autoregressive spectrum sigma2 / |A(e^{i theta})|^2 with
/// A(z) = 1 - sum_l a_l z^{-l}. The sign convention matches a one-step
/// predictor u(0) ~ sum_l a_l u(-l), so an exact AR fit returns a itself.
inline Psd psd_from_ar(std::span<const double> a, double sigma2, const FrequencyGrid& grid) {
  detail::require(sigma2 > 0.0 && std::isfinite(sigma2), "AR innovation variance must be positive");
  for (double c : a) detail::require(std::isfinite(c), "AR coefficients must be finite");
  std::vector<double> values(grid.size());
  double min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double theta = grid.node(k);
    std::complex<double> poly(1.0, 0.0);
    for (std::size_t l = 0; l < a.size(); ++l) {
      poly -= a[l] * std::polar(1.0, -static_cast<double>(l + 1) * theta);
    }
    const double mag = std::abs(poly);
    min_abs = std::min(min_abs, mag);
    values[k] = sigma2 / std::norm(poly);
  }
  if (!(min_abs > 1e-8)) {
    detail::fail(ErrorKind::kUnstableModel,
                 "AR polynomial nearly vanishes on the unit circle (min |A| = " +
                     std::to_string(min_abs) + ")");
  }
  return Psd(grid, std::move(values));
}

inline Psd psd_from_ar(std::initializer_list<double> a, double sigma2, const FrequencyGrid& grid) {
  return psd_from_ar(std::span<const double>(a.begin(), a.size()), sigma2, grid);
}

/// Samples of log(f1/f2), or the marker state when the log-ratio is not
/// square integrable (exactly one of f1, f2 vanishes somewhere).
class LogRatio {
 public:
  static LogRatio not_square_loggable() { return LogRatio(std::nullopt); }
  static LogRatio of(std::vector<double> samples) { return LogRatio(std::move(samples)); }

  bool square_loggable() const noexcept { return samples_.has_value(); }
  explicit operator bool() const noexcept { return square_loggable(); }

  std::span<const double> samples() const {
    if (!samples_) detail::fail(ErrorKind::kInvalidArgument, "log-ratio is not square integrable");
    return *samples_;
  }

 private:
  explicit LogRatio(std::optional<std::vector<double>> s) : samples_(std::move(s)) {}
  std::optional<std::vector<double>> samples_;
};

namespace detail {

inline void require_same_grid(const Psd& f1, const Psd& f2) {
  require(f1.grid() == f2.grid(), "spectra live on different grids (n = " +
                                      std::to_string(f1.grid().size()) + " vs " +
                                      std::to_string(f2.grid().size()) + ")");
}

// log(a/b) for a, b > 0 without spurious overflow of the quotient.
// Antisymmetric by construction: log_quotient(b, a) == -log_quotient(a, b)
// bit for bit, so d_g is exactly symmetric.
inline double log_quotient(double a, double b) {
  if (a < b) return -log_quotient(b, a);
  const double q = a / b;
  if (std::isfinite(q)) return std::log(q);
  return std::log(a) - std::log(b);
}

}  // namespace detail

/// log(f1/f2) on the grid. Where both spectra vanish the sample is 0: the
/// densities agree there. If the zero sets differ the result is the
/// not-square-loggable marker.
inline LogRatio log_ratio(const Psd& f1, const Psd& f2) {
  detail::require_same_grid(f1, f2);
  if (f1.zero_set() != f2.zero_set()) return LogRatio::not_square_loggable();
  std::vector<double> out(f1.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (f1[k] == 0.0) ? 0.0 : detail::log_quotient(f1[k], f2[k]);
  }
  return LogRatio::of(std::move(out));
}

/// exp(mean(log f)); 0 when f has any zero.
inline double geometric_mean(const Psd& f) {
  if (!f.strictly_positive()) return 0.0;
  const auto v = f.values();
  return std::exp(detail::grid_average(v.size(), [&](std::size_t k) { return std::log(v[k]); }));
}

/// (mean(f^r))^{1/r} for r != 0. Evaluated in the log domain so large
/// exponents do not overflow.
inline double generalized_mean(const Psd& f, double r) {
  detail::require(r != 0.0 && std::isfinite(r),
                  "generalized mean exponent must be finite and nonzero (use geometric_mean for r = 0)");
  if (r < 0.0 && !f.strictly_positive()) {
    detail::fail(ErrorKind::kDivisionByZero, "negative-exponent mean of a spectrum with zeros");
  }
  const auto v = f.values();
  double peak = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (x > 0.0) peak = std::max(peak, r * std::log(x));
  }
  const double scaled_mean = detail::grid_average(v.size(), [&](std::size_t k) {
    return v[k] > 0.0 ? std::exp(r * std::log(v[k]) - peak) : 0.0;
  });
  return std::exp((peak + std::log(scaled_mean)) / r);
}

/// Representative of the spectral ray {kappa * f : kappa > 0}, normalized to
/// unit geometric mean.
class SpectralRay {
 public:
  const Psd& representative() const noexcept { return rep_; }

 private:
  explicit SpectralRay(Psd rep) : rep_(std::move(rep)) {}
  Psd rep_;
  friend SpectralRay normalize_to_ray(const Psd& f);
};

inline SpectralRay normalize_to_ray(const Psd& f) {
  if (!f.strictly_positive()) {
    detail::fail(ErrorKind::kNotNormalizable,
                 "spectrum vanishes at " + std::to_string(f.zero_set().size()) +
                     " grid point(s); its ray has no unit-geometric-mean representative");
  }
  const auto v = f.values();
  const double log_gm =
      detail::grid_average(v.size(), [&](std::size_t k) { return std::log(v[k]); });
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::exp(std::log(v[k]) - log_gm);
  return SpectralRay(Psd(f.grid(), std::move(out)));
}

}  // namespace specmetric
