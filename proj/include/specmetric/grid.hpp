#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "specmetric/error.hpp"

namespace specmetric {

/// Uniform grid over the half-open interval [-pi, pi).
///
/// Node k sits at -pi + 2*pi*k/n and carries weight 1/n, so that
/// sum_k x(theta_k) / n approximates the normalized integral
/// (1/2pi) * int_{-pi}^{pi} x(theta) dtheta. For 2pi-periodic integrands this
/// left-endpoint rule coincides with the trapezoid rule and is exact on
/// trigonometric polynomials of degree < n.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::size_t n) : n_(n) {
    detail::require(n >= 2, "grid needs at least 2 nodes, got " + std::to_string(n));
  }

  std::size_t size() const noexcept { return n_; }
  double weight() const noexcept { return 1.0 / static_cast<double>(n_); }
  double spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(n_); }

  double node(std::size_t k) const noexcept {
    return -std::numbers::pi + spacing() * static_cast<double>(k);
  }

  std::vector<double> nodes() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = node(k);
    return out;
  }

  /// Index of the node at -theta_k (the grid is closed under negation mod 2pi).
  std::size_t mirror(std::size_t k) const noexcept { return (n_ - k) % n_; }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  std::size_t n_;
};

inline FrequencyGrid make_grid(std::size_t n) { return FrequencyGrid(n); }

/// Evaluates fn(theta_k) at every node.
template <typename Fn>
std::vector<double> sample(const FrequencyGrid& grid, Fn&& fn) {
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = fn(grid.node(k));
  return out;
}

namespace detail {

// Neumaier compensated summation. Order is fixed, so results are reproducible
// bit-for-bit regardless of caller.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

template <typename Fn>
double grid_average(std::size_t n, Fn&& term) {
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) acc.add(term(k));
  return acc.value() / static_cast<double>(n);
}

inline void check_samples(const FrequencyGrid& grid, std::span<const double> samples) {
  require(samples.size() == grid.size(),
          "sample count " + std::to_string(samples.size()) + " does not match grid size " +
              std::to_string(grid.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    require(std::isfinite(samples[k]), "non-finite sample at index " + std::to_string(k));
  }
}

// Assumes samples already validated.
inline double central_variance_unchecked(std::span<const double> x) {
  const std::size_t n = x.size();
  const double m = grid_average(n, [&](std::size_t k) { return x[k]; });
  const double second = grid_average(n, [&](std::size_t k) { return x[k] * x[k]; });
  // Corrected two-pass form: algebraically mean(x^2) - mean(x)^2, but immune to
  // the cancellation that form suffers when |mean| dominates the spread.
  const double centered_sq = grid_average(n, [&](std::size_t k) {
    const double d = x[k] - m;
    return d * d;
  });
  const double centered = grid_average(n, [&](std::size_t k) { return x[k] - m; });
  const double var = centered_sq - centered * centered;
  if (var >= 0.0) return var;
  if (var >= -1e-12 * second) return 0.0;
  fail(ErrorKind::kInternal, "negative variance residue " + std::to_string(var));
}

}  // namespace detail

/// Grid approximation of int x(theta) dtheta/2pi.
inline double mean(const FrequencyGrid& grid, std::span<const double> samples) {
  detail::check_samples(grid, samples);
  return detail::grid_average(samples.size(), [&](std::size_t k) { return samples[k]; });
}

/// mean(x^2) - mean(x)^2 over the grid measure. Rounding residues slightly
/// below zero are clamped; anything below -1e-12 * mean(x^2) is a bug and throws.
inline double central_variance(const FrequencyGrid& grid, std::span<const double> samples) {
  detail::check_samples(grid, samples);
  return detail::central_variance_unchecked(samples);
}

}  // namespace specmetric
