#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "specmetric/error.hpp"
#include "specmetric/grid.hpp"
#include "specmetric/spectra.hpp"

namespace specmetric {

/// A real number or +infinity. Infinite absorbs addition and compares above
/// every finite value. With NonNegative set, finite values must be >= 0.
template <bool NonNegative>
class Extended {
 public:
  static Extended finite(double value) {
    detail::require(std::isfinite(value), "finite value expected");
    if constexpr (NonNegative) {
      detail::require(value >= 0.0, "negative distance " + std::to_string(value));
    }
    return Extended(value);
  }
  static Extended infinite() { return Extended(std::numeric_limits<double>::infinity()); }

  bool is_finite() const noexcept { return std::isfinite(value_); }
  bool is_infinite() const noexcept { return !is_finite(); }

  /// The finite value; throws on Infinite.
  double value() const {
    if (is_infinite()) detail::fail(ErrorKind::kInvalidArgument, "value is infinite");
    return value_;
  }

  /// The value as a double, with Infinite mapped to +inf.
  double as_double() const noexcept { return value_; }

  friend Extended operator+(Extended a, Extended b) {
    if (a.is_infinite() || b.is_infinite()) return infinite();
    return Extended(a.value_ + b.value_);
  }

  friend bool operator==(const Extended&, const Extended&) = default;
  friend auto operator<=>(const Extended& a, const Extended& b) {
    return a.value_ <=> b.value_;
  }

 private:
  explicit Extended(double v) : value_(v) {}
  double value_;
};

using DistanceResult = Extended<true>;
using ExtendedReal = Extended<false>;

enum class SpectrumClass {
  kStrictlyPositive,
  kHasZeros,
};

inline const char* to_string(SpectrumClass c) {
  return c == SpectrumClass::kStrictlyPositive ? "StrictlyPositive" : "HasZeros";
}

namespace detail {

// (1/r) log mean exp(r * d) for centered samples d, accurate when r*d is
// small (the perturbative regime) and overflow-safe when it is not.
inline double log_power_mean_centered(std::span<const double> d, double r) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double x : d) peak = std::max(peak, r * x);
  double log_mean;
  if (peak < 700.0) {
    const double m = grid_average(d.size(), [&](std::size_t k) { return std::expm1(r * d[k]); });
    log_mean = std::log1p(m);
  } else {
    const double m =
        grid_average(d.size(), [&](std::size_t k) { return std::exp(r * d[k] - peak); });
    log_mean = peak + std::log(m);
  }
  return log_mean / r;
}

inline std::vector<double> centered(std::span<const double> x) {
  const double m = grid_average(x.size(), [&](std::size_t k) { return x[k]; });
  std::vector<double> d(x.begin(), x.end());
  for (double& v : d) v -= m;
  return d;
}

// (1/r) log mean((f1/f2)^r) when the zero sets differ, in [-inf, +inf].
// Index classes: both positive, both zero (ratio 1), numerator zero (ratio
// 0), denominator zero (ratio +inf).
inline double log_power_mean_extended(const Psd& f1, const Psd& f2, double r) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  bool numerator_zero = false;
  bool denominator_zero = false;
  for (std::size_t k = 0; k < f1.size(); ++k) {
    if (f1[k] == 0.0 && f2[k] > 0.0) numerator_zero = true;
    if (f1[k] > 0.0 && f2[k] == 0.0) denominator_zero = true;
  }
  if (r > 0.0 && denominator_zero) return kInf;
  if (r < 0.0 && numerator_zero) return -kInf;

  std::vector<double> logs;
  for (std::size_t k = 0; k < f1.size(); ++k) {
    if (f1[k] > 0.0 && f2[k] > 0.0) {
      logs.push_back(r * log_quotient(f1[k], f2[k]));
    } else if (f1[k] == 0.0 && f2[k] == 0.0) {
      logs.push_back(0.0);
    }
  }
  if (logs.empty()) return r > 0.0 ? -kInf : kInf;
  const double peak = *std::max_element(logs.begin(), logs.end());
  CompensatedSum acc;
  for (double x : logs) acc.add(std::exp(x - peak));
  return (peak + std::log(acc.value() / static_cast<double>(f1.size()))) / r;
}

inline void check_direction(const Psd& f, std::span<const double> delta) {
  require(f.strictly_positive(), "base spectrum must be strictly positive");
  check_samples(f.grid(), delta);
}

}  // namespace detail

/// Geodesic distance: the standard deviation, under dtheta/2pi, of
/// log(f1/f2). Infinite when the log-ratio is not square integrable.
inline DistanceResult geodesic_distance(const Psd& f1, const Psd& f2) {
  const LogRatio lr = log_ratio(f1, f2);
  if (!lr) return DistanceResult::infinite();
  return DistanceResult::finite(std::sqrt(detail::central_variance_unchecked(lr.samples())));
}

/// geodesic_distance plus |mean(f1) - mean(f2)|, which separates points on
/// the same ray.
inline DistanceResult scaled_metric_d(const Psd& f1, const Psd& f2) {
  const DistanceResult dg = geodesic_distance(f1, f2);
  if (dg.is_infinite()) return dg;
  const double gap = mean(f1.grid(), f1.values()) - mean(f2.grid(), f2.values());
  return dg + DistanceResult::finite(std::abs(gap));
}

/// log mean(f1/f2) - mean(log(f1/f2)): the log of the arithmetic over the
/// geometric mean of the ratio.
inline ExtendedReal divergence_ag(const Psd& f1, const Psd& f2) {
  const LogRatio lr = log_ratio(f1, f2);
  if (!lr) return ExtendedReal::infinite();
  const std::vector<double> d = detail::centered(lr.samples());
  return ExtendedReal::finite(std::max(0.0, detail::log_power_mean_centered(d, 1.0)));
}

inline ExtendedReal divergence_sym(const Psd& f1, const Psd& f2) {
  return divergence_ag(f1, f2) + divergence_ag(f2, f1);
}

/// log M_r(f1/f2) - log M_s(f1/f2) with M_r the power mean of order r.
/// Nonnegative for r > s. Differing zero sets yield Infinite when the
/// difference is +infinity; -infinity and infinity-minus-infinity are
/// rejected as invalid arguments.
inline ExtendedReal divergence_rs(const Psd& f1, const Psd& f2, double r, double s) {
  detail::require(std::isfinite(r) && std::isfinite(s), "r and s must be finite");
  detail::require(r != 0.0 && s != 0.0, "r and s must be nonzero (use divergence_ag for the geometric mean)");
  detail::require(r != s, "r and s must differ");
  detail::require_same_grid(f1, f2);

  if (f1.zero_set() == f2.zero_set()) {
    const LogRatio lr = log_ratio(f1, f2);
    const std::vector<double> d = detail::centered(lr.samples());
    return ExtendedReal::finite(detail::log_power_mean_centered(d, r) -
                                detail::log_power_mean_centered(d, s));
  }
  const double a = detail::log_power_mean_extended(f1, f2, r);
  const double b = detail::log_power_mean_extended(f1, f2, s);
  if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) {
    detail::fail(ErrorKind::kInvalidArgument,
                 "power means of orders r and s are both infinite; divergence is indeterminate");
  }
  const double diff = a - b;
  if (diff == -std::numeric_limits<double>::infinity()) {
    detail::fail(ErrorKind::kInvalidArgument, "divergence is -infinity for this (r, s) ordering");
  }
  if (std::isinf(diff)) return ExtendedReal::infinite();
  return ExtendedReal::finite(diff);
}

/// Arithmetic over geometric mean of f1/f2, evaluated directly from the
/// ratio. Equals the variance degradation incurred when predicting a process
/// with spectrum f1 using the optimal predictor designed for f2.
inline ExtendedReal prediction_ratio(const Psd& f1, const Psd& f2) {
  detail::require_same_grid(f1, f2);
  if (f1.zero_set() != f2.zero_set()) return ExtendedReal::infinite();
  const std::size_t n = f1.size();
  auto ratio = [&](std::size_t k) { return f1[k] == 0.0 ? 1.0 : f1[k] / f2[k]; };
  const double arithmetic = detail::grid_average(n, ratio);
  const double log_geometric = detail::grid_average(n, [&](std::size_t k) {
    return f1[k] == 0.0 ? 0.0 : detail::log_quotient(f1[k], f2[k]);
  });
  const double rho = arithmetic / std::exp(log_geometric);
  if (!std::isfinite(rho)) return ExtendedReal::infinite();
  return ExtendedReal::finite(rho);
}

/// Quadratic form mean((delta/f)^2) - mean(delta/f)^2 at base point f.
/// Degenerate along the ray direction delta = c * f.
inline double riemannian_form(const Psd& f, std::span<const double> delta) {
  detail::check_direction(f, delta);
  std::vector<double> rel(delta.size());
  for (std::size_t k = 0; k < rel.size(); ++k) rel[k] = delta[k] / f[k];
  return detail::central_variance_unchecked(rel);
}

/// Fisher information form mean(delta^2 / f), for f a probability density
/// (mean 1) and delta a zero-mean tangent direction.
inline double fisher_form(const Psd& f, std::span<const double> delta) {
  detail::check_direction(f, delta);
  const double mass = mean(f.grid(), f.values());
  detail::require(std::abs(mass - 1.0) <= 1e-9,
                  "Fisher form needs a probability density: mean(f) = " + std::to_string(mass));
  const double drift = mean(f.grid(), delta);
  detail::require(std::abs(drift) <= 1e-9,
                  "Fisher form needs a zero-mean direction: mean(delta) = " + std::to_string(drift));
  return detail::grid_average(delta.size(), [&](std::size_t k) { return delta[k] * delta[k] / f[k]; });
}

/// StrictlyPositive is the grid-level stand-in for spectra whose logarithm
/// is square integrable. A finite grid cannot tell square- from plain
/// log-integrability, so only the zero/no-zero split is reported.
inline SpectrumClass classify(const Psd& f) {
  return f.strictly_positive() ? SpectrumClass::kStrictlyPositive : SpectrumClass::kHasZeros;
}

}  // namespace specmetric
