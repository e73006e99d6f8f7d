// Regenerates the spectra and time series under tests/fixtures/.
//   make_fixtures <dir>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <vector>

#include "specmetric/specmetric.hpp"

int main(int argc, char** argv) {
  using namespace specmetric;
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const FrequencyGrid grid(1024);

  write_psd_csv(psd_from_function(grid, [](double) { return 1.0; }), dir / "const1.csv");
  write_psd_csv(psd_from_function(grid, [](double t) { return std::exp(std::cos(t)); }), dir / "exp_cos.csv");
  write_psd_csv(psd_from_function(grid, [](double t) { return std::exp(2.0 * std::cos(t)); }),
                dir / "exp_2cos.csv");
  write_psd_csv(psd_from_ar({0.5}, 1.0, grid), dir / "ar1_pos.csv");
  write_psd_csv(psd_from_ar({-0.5}, 1.0, grid), dir / "ar1_neg.csv");
  // Exact zero at theta = 0.
  write_psd_csv(psd_from_function(grid, [](double t) { return 1.0 - std::cos(t); }), dir / "notch.csv");

  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x(4096);
  double prev = 0.0;
  for (int burn = 0; burn < 100; ++burn) prev = 0.5 * prev + noise(rng);
  for (double& v : x) v = prev = 0.5 * prev + noise(rng);
  write_time_series_csv(TimeSeries(x, "ar1_series"), dir / "ar1_series.csv");
  return 0;
}
