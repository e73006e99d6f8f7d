#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specmetric/error.hpp"
#include "specmetric/grid.hpp"
#include "specmetric/spectra.hpp"

namespace specmetric {

class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> samples, std::string label = {})
      : samples_(std::move(samples)), label_(std::move(label)) {
    detail::require(samples_.size() >= 2, "time series needs at least 2 samples");
    for (std::size_t t = 0; t < samples_.size(); ++t) {
      detail::require(std::isfinite(samples_[t]), "non-finite sample at index " + std::to_string(t));
    }
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const std::string& label() const noexcept { return label_; }

 private:
  std::vector<double> samples_;
  std::string label_;
};

enum class Window {
  kRectangular,
  kHann,
};

namespace detail {

// |sum_t w_t x_t e^{-i t theta_k}|^2 / sum_t w_t^2 at every grid node.
// theta_k = -pi + 2 pi k / n, so e^{-i t theta_k} = (-1)^t e^{-2 pi i k t / n}.
inline std::vector<double> windowed_periodogram(std::span<const double> x,
                                                std::span<const double> w,
                                                const std::vector<std::complex<double>>& twiddle) {
  const std::size_t n = twiddle.size();
  double energy = 0.0;
  for (double v : w) energy += v * v;
  std::vector<double> tapered(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) tapered[t] = ((t % 2 == 0) ? 1.0 : -1.0) * w[t] * x[t];
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    std::size_t idx = 0;
    for (std::size_t t = 0; t < tapered.size(); ++t) {
      acc += tapered[t] * twiddle[idx];
      idx += k;
      if (idx >= n) idx %= n;
    }
    out[k] = std::norm(acc) / energy;
  }
  return out;
}

inline std::vector<std::complex<double>> twiddles(const FrequencyGrid& grid) {
  std::vector<std::complex<double>> tw(grid.size());
  for (std::size_t j = 0; j < tw.size(); ++j) tw[j] = std::polar(1.0, -grid.spacing() * static_cast<double>(j));
  return tw;
}

inline Psd to_estimate(const FrequencyGrid& grid, std::vector<double> values) {
  for (double v : values) {
    if (v > 0.0) return Psd(grid, std::move(values));
  }
  fail(ErrorKind::kEstimationFailed, "estimated spectrum is identically zero");
}

}  // namespace detail

/// Raw periodogram |sum_t x_t e^{-i t theta}|^2 / L evaluated at the grid
/// nodes. Exact zeros are kept; they make distances to other spectra
/// infinite, which is often a sign that averaging (welch) is needed.
inline Psd periodogram(const TimeSeries& ts, const FrequencyGrid& grid) {
  const std::vector<double> ones(ts.size(), 1.0);
  return detail::to_estimate(grid, detail::windowed_periodogram(ts.samples(), ones, detail::twiddles(grid)));
}

inline std::vector<double> make_window(Window window, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (window == Window::kHann) {
    // Periodic Hann: overlapping segments at 50% sum to a constant.
    for (std::size_t t = 0; t < length; ++t) {
      w[t] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(length)));
    }
  }
  return w;
}

/// Welch average of windowed segment periodograms. Each segment is
/// normalized by its window energy, so white noise of variance v averages to
/// a flat spectrum near v.
inline Psd welch(const TimeSeries& ts, std::size_t segment, double overlap, Window window,
                 const FrequencyGrid& grid) {
  detail::require(segment >= 8, "segment length must be at least 8, got " + std::to_string(segment));
  detail::require(segment <= ts.size(), "segment length " + std::to_string(segment) +
                                            " exceeds series length " + std::to_string(ts.size()));
  detail::require(overlap >= 0.0 && overlap < 1.0, "overlap must lie in [0, 1)");
  const auto hop = static_cast<std::size_t>(std::floor(static_cast<double>(segment) * (1.0 - overlap)));
  detail::require(hop >= 1, "overlap leaves a zero hop");

  const std::vector<double> w = make_window(window, segment);
  const auto tw = detail::twiddles(grid);
  const auto x = ts.samples();
  std::vector<double> avg(grid.size(), 0.0);
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment <= x.size(); start += hop) {
    const auto seg = detail::windowed_periodogram(x.subspan(start, segment), w, tw);
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += seg[k];
    ++count;
  }
  for (double& v : avg) v /= static_cast<double>(count);
  return detail::to_estimate(grid, std::move(avg));
}

}  // namespace specmetric
