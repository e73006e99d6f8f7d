#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "specmetric/error.hpp"
#include "specmetric/grid.hpp"
#include "specmetric/spectra.hpp"

namespace specmetric {

/// Autocovariance lags c_0..c_M of a real stationary process.
class Autocovariance {
 public:
  explicit Autocovariance(std::vector<double> lags) : lags_(std::move(lags)) {
    detail::require(!lags_.empty() && lags_[0] > 0.0, "autocovariance needs c_0 > 0");
    for (std::size_t k = 1; k < lags_.size(); ++k) {
      detail::require(std::isfinite(lags_[k]) && std::abs(lags_[k]) <= lags_[0] * (1.0 + 1e-12),
                      "|c_" + std::to_string(k) + "| exceeds c_0");
    }
  }

  std::size_t max_lag() const noexcept { return lags_.size() - 1; }
  double operator[](std::size_t k) const noexcept { return lags_[k]; }
  const std::vector<double>& lags() const noexcept { return lags_; }

 private:
  std::vector<double> lags_;
};

/// One-step predictor u(0) ~ sum_l coeffs[l-1] u(-l) with its attained
/// error variance.
struct PredictorCoeffs {
  std::vector<double> coeffs;
  double attained_variance = 0.0;

  std::size_t order() const noexcept { return coeffs.size(); }
};

namespace detail {

inline void require_even(const Psd& f) {
  const FrequencyGrid& g = f.grid();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double a = f[k];
    const double b = f[g.mirror(k)];
    if (std::abs(a - b) > 1e-9 * std::max(a, b)) {
      fail(ErrorKind::kInvalidArgument,
           "spectrum is not even (f(theta) != f(-theta) at index " + std::to_string(k) +
               "); prediction needs a real process");
    }
  }
}

}  // namespace detail

/// c_k = mean over the grid of f(theta) cos(k theta), for k <= max_lag < n/2.
inline Autocovariance autocov_from_psd(const Psd& f, std::size_t max_lag) {
  const FrequencyGrid& g = f.grid();
  detail::require(2 * max_lag < g.size(),
                  "max_lag " + std::to_string(max_lag) + " must be below n/2 = " +
                      std::to_string(g.size() / 2));
  detail::require_even(f);
  std::vector<double> lags(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    lags[lag] = detail::grid_average(f.size(), [&](std::size_t k) {
      return f[k] * std::cos(static_cast<double>(lag) * g.node(k));
    });
  }
  return Autocovariance(std::move(lags));
}

/// Levinson-Durbin solution of the order-p Toeplitz normal equations.
inline PredictorCoeffs levinson(const Autocovariance& acv, std::size_t p) {
  detail::require(p >= 1, "predictor order must be at least 1");
  detail::require(p <= acv.max_lag(),
                  "order " + std::to_string(p) + " needs lags up to " + std::to_string(p) +
                      ", have " + std::to_string(acv.max_lag()));
  std::vector<double> a(p, 0.0);
  std::vector<double> prev(p, 0.0);
  double err = acv[0];
  for (std::size_t m = 1; m <= p; ++m) {
    double acc = acv[m];
    for (std::size_t j = 1; j < m; ++j) acc -= a[j - 1] * acv[m - j];
    const double reflection = acc / err;
    prev = a;
    a[m - 1] = reflection;
    for (std::size_t j = 1; j < m; ++j) a[j - 1] = prev[j - 1] - reflection * prev[m - j - 1];
    err *= (1.0 - reflection * reflection);
    if (!(err > 0.0)) {
      detail::fail(ErrorKind::kDegenerateCovariance,
                   "prediction error variance collapsed at order " + std::to_string(m));
    }
  }
  return PredictorCoeffs{std::move(a), err};
}

/// Error variance mean(|1 - sum_l p_l e^{-i l theta}|^2 f(theta)) obtained by
/// applying a fixed predictor to a process with spectrum f. The squared error
/// filter is expanded as r_0 + 2 sum_m r_m cos(m theta).
inline double degraded_variance(const Psd& f, const PredictorCoeffs& pred) {
  const std::size_t p = pred.order();
  detail::require(f.size() > 2 * p,
                  "grid of " + std::to_string(f.size()) + " nodes cannot resolve an order-" +
                      std::to_string(p) + " error filter");
  std::vector<double> filter(p + 1);
  filter[0] = 1.0;
  for (std::size_t l = 1; l <= p; ++l) filter[l] = -pred.coeffs[l - 1];
  std::vector<double> autocorr(p + 1, 0.0);
  for (std::size_t m = 0; m <= p; ++m) {
    for (std::size_t j = 0; j + m <= p; ++j) autocorr[m] += filter[j] * filter[j + m];
  }
  const FrequencyGrid& g = f.grid();
  const double v = detail::grid_average(f.size(), [&](std::size_t k) {
    const double theta = g.node(k);
    double gain = autocorr[0];
    for (std::size_t m = 1; m <= p; ++m) gain += 2.0 * autocorr[m] * std::cos(static_cast<double>(m) * theta);
    return gain * f[k];
  });
  return v;
}

/// Variance degradation measured through an explicit order-p predictor
/// designed for f2 and applied to f1, over the infinite-order optimum
/// exp(mean(log f1)) for f1.
inline double rho_empirical(const Psd& f1, const Psd& f2, std::size_t p) {
  detail::require_same_grid(f1, f2);
  detail::require(f1.strictly_positive() && f2.strictly_positive(),
                  "prediction ratio needs strictly positive spectra");
  detail::require_even(f1);
  const PredictorCoeffs pred = levinson(autocov_from_psd(f2, p), p);
  return degraded_variance(f1, pred) / geometric_mean(f1);
}

}  // namespace specmetric
