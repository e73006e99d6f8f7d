#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "specmetric/specmetric.hpp"

using namespace specmetric;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("specmetric_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kInternal;
}

}  // namespace

TEST(Periodogram, ImpulseIsFlat) {
  std::vector<double> x(32, 0.0);
  x[0] = 1.0;
  const Psd f = periodogram(TimeSeries(x), FrequencyGrid(32));
  for (double v : f.values()) EXPECT_NEAR(v, 1.0 / 32, 1e-15);
}

TEST(Periodogram, ConstantConcentratesAtZeroFrequency) {
  const std::size_t L = 16;
  const FrequencyGrid g(L);
  const Psd f = periodogram(TimeSeries(std::vector<double>(L, 2.0)), g);
  const std::size_t zero_bin = L / 2;
  EXPECT_DOUBLE_EQ(g.node(zero_bin), 0.0);
  EXPECT_NEAR(f[zero_bin], L * 4.0, 1e-12);
  for (std::size_t k = 0; k < L; ++k) {
    if (k != zero_bin) {
      EXPECT_LT(f[k], 1e-20);
    }
  }
}

TEST(Periodogram, ZeroSignalFailsEstimation) {
  EXPECT_EQ(kind_of([] { periodogram(TimeSeries(std::vector<double>(8, 0.0)), FrequencyGrid(8)); }),
            ErrorKind::kEstimationFailed);
}

TEST(Periodogram, ParsevalWhenGridCoversLength) {
  const auto x = oracle::simulate_ar1(0.3, 100, 4);
  double energy = 0.0;
  for (double v : x) energy += v * v;
  for (std::size_t n : {100u, 128u, 333u}) {
    const Psd f = periodogram(TimeSeries(x), FrequencyGrid(n));
    EXPECT_NEAR(mean(f.grid(), f.values()), energy / x.size(), 1e-12) << n;
  }
}

TEST(TimeSeries, Invariants) {
  EXPECT_THROW(TimeSeries({1.0}), Error);
  EXPECT_THROW(TimeSeries({1.0, NAN}), Error);
}

TEST(Welch, SingleRectangularSegmentIsPeriodogram) {
  const auto x = oracle::simulate_ar1(0.5, 64, 1);
  const FrequencyGrid g(64);
  const Psd w = welch(TimeSeries(x), 64, 0.0, Window::kRectangular, g);
  const Psd p = periodogram(TimeSeries(x), g);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(w[k], p[k], 1e-12 * p[k]);
}

TEST(Welch, WhiteNoiseLevel) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x(1 << 14);
  for (double& v : x) v = noise(rng);
  const Psd f = welch(TimeSeries(x), 256, 0.5, Window::kHann, FrequencyGrid(256));
  EXPECT_NEAR(mean(f.grid(), f.values()), 1.0, 0.1);
}

TEST(Welch, Errors) {
  const TimeSeries ts(oracle::simulate_ar1(0.5, 100, 1));
  const FrequencyGrid g(64);
  EXPECT_THROW(welch(ts, 4, 0.5, Window::kHann, g), Error);
  EXPECT_THROW(welch(ts, 101, 0.5, Window::kHann, g), Error);
  EXPECT_THROW(welch(ts, 32, 1.0, Window::kHann, g), Error);
  EXPECT_THROW(welch(ts, 32, -0.1, Window::kHann, g), Error);
}

TEST(EstimationPipeline, SameProcessDistanceShrinksWithData) {
  const FrequencyGrid g(512);
  double prev = INFINITY;
  for (std::size_t length : {1u << 12, 1u << 14, 1u << 16}) {
    const Psd a = welch(TimeSeries(oracle::simulate_ar1(0.5, length, 100)), 512, 0.5, Window::kHann, g);
    const Psd b = welch(TimeSeries(oracle::simulate_ar1(0.5, length, 200)), 512, 0.5, Window::kHann, g);
    const double d = geodesic_distance(a, b).value();
    EXPECT_LT(d, prev);
    prev = d;
    if (length == 1u << 16) {
      EXPECT_LT(d, 0.2);
    }
  }
}

TEST(PsdCsv, ReadsSimpleFile) {
  TempDir dir;
  const fs::path p = dir.path() / "four.csv";
  write_text(p,
             "theta,psd\n-3.141592653589793,1\n-1.5707963267948966,2\n0,3\n1.5707963267948966,4\n");
  const Psd f = read_psd_csv(p);
  EXPECT_EQ(f.grid().size(), 4u);
  EXPECT_EQ(f[2], 3.0);
}

TEST(PsdCsv, RejectsJitteredGrid) {
  TempDir dir;
  const fs::path p = dir.path() / "jitter.csv";
  write_text(p, "theta,psd\n-3.141592653589793,1\n-1.5717963267948966,2\n0,3\n1.5707963267948966,4\n");
  EXPECT_EQ(kind_of([&] { read_psd_csv(p); }), ErrorKind::kInvalidGrid);
}

TEST(PsdCsv, ReportsLineNumbers) {
  TempDir dir;
  const fs::path bad = dir.path() / "bad.csv";
  write_text(bad, "theta,psd\n-3.141592653589793,1\n0,abc\n");
  try {
    read_psd_csv(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("bad.csv:3"), std::string::npos);
  }
  const fs::path neg = dir.path() / "neg.csv";
  write_text(neg, "theta,psd\n-3.141592653589793,1\n0,-2\n");
  try {
    read_psd_csv(neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConeViolation);
    EXPECT_NE(std::string(e.what()).find("neg.csv:3"), std::string::npos);
  }
  const fs::path header = dir.path() / "header.csv";
  write_text(header, "freq,value\n-3.141592653589793,1\n0,2\n");
  EXPECT_EQ(kind_of([&] { read_psd_csv(header); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([&] { read_psd_csv(dir.path() / "missing.csv"); }), ErrorKind::kIo);
}

TEST(PsdCsv, RoundTripIsBitExact) {
  TempDir dir;
  const fs::path p = dir.path() / "ar.csv";
  const Psd f = psd_from_ar({0.5}, 1.0, FrequencyGrid(4096));
  write_psd_csv(f, p);
  const Psd back = read_psd_csv(p);
  EXPECT_EQ(back, f);
}

TEST(PsdCsv, RoundTripProperty) {
  TempDir dir;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> size(2, 300);
  std::uniform_real_distribution<double> exponent(-300, 300);
  for (int trial = 0; trial < 25; ++trial) {
    const FrequencyGrid g(size(rng));
    std::vector<double> v(g.size());
    for (double& x : v) x = std::pow(10.0, exponent(rng));
    if (trial % 5 == 0) v.front() = 0.0;
    const Psd f(g, v);
    const fs::path p = dir.path() / ("f" + std::to_string(trial) + ".csv");
    write_psd_csv(f, p);
    EXPECT_EQ(read_psd_csv(p), f);
  }
}

TEST(TimeSeriesCsv, BothHeaders) {
  TempDir dir;
  write_text(dir.path() / "a.csv", "t,value\n0,1.5\n1,-2\n2,3\n");
  write_text(dir.path() / "b.csv", "value\n1.5\n-2\n3\n");
  const TimeSeries a = read_time_series_csv(dir.path() / "a.csv");
  const TimeSeries b = read_time_series_csv(dir.path() / "b.csv");
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(std::vector<double>(a.samples().begin(), a.samples().end()),
            std::vector<double>(b.samples().begin(), b.samples().end()));
  EXPECT_EQ(a.label(), "a");
  write_text(dir.path() / "c.csv", "value\n1.5\nfoo\n");
  EXPECT_EQ(kind_of([&] { read_time_series_csv(dir.path() / "c.csv"); }), ErrorKind::kParse);
}

TEST(DistanceMatrixCsv, SingleEntry) {
  const FrequencyGrid g(8);
  const DistanceMatrix m = build_distance_matrix({"only"}, {psd_from_ar({0.1}, 1.0, g)});
  std::ostringstream out;
  write_distance_matrix_csv(m, out);
  EXPECT_EQ(out.str(), ",only\nonly,0\n");
}

TEST(DistanceMatrixCsv, InfiniteEntriesAreSymmetric) {
  const FrequencyGrid g(8);
  const Psd one = psd_from_function(g, [](double) { return 1.0; });
  const Psd holed = psd_from_samples(g, {1, 1, 1, 0, 1, 1, 1, 1});
  const DistanceMatrix m = build_distance_matrix({"a", "b"}, {one, holed});
  std::ostringstream out;
  write_distance_matrix_csv(m, out);
  EXPECT_EQ(out.str(), ",a,b\na,0,inf\nb,inf,0\n");
}

TEST(DistanceMatrixCsv, ExpCosFamily) {
  const FrequencyGrid g(1024);
  std::vector<Psd> spectra;
  for (double scale : {0.0, 1.0, 2.0}) {
    spectra.push_back(psd_from_function(g, [scale](double t) { return std::exp(scale * std::cos(t)); }));
  }
  const DistanceMatrix m = build_distance_matrix({"c0", "c1", "c2"}, spectra, 3);
  EXPECT_NEAR(m.at(0, 1).value(), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(m.at(1, 2).value(), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(m.at(0, 2).value(), std::sqrt(2.0), 1e-12);
  std::ostringstream out;
  write_distance_matrix_csv(m, out);
  EXPECT_EQ(out.str(),
            ",c0,c1,c2\nc0,0,0.707106781187,1.41421356237\nc1,0.707106781187,0,0.707106781187\n"
            "c2,1.41421356237,0.707106781187,0\n");
}

TEST(DistanceMatrix, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(8);
  const FrequencyGrid g(256);
  std::vector<Psd> spectra;
  std::vector<std::string> labels;
  for (int i = 0; i < 9; ++i) {
    spectra.push_back(oracle::random_trig_spectrum(rng, g));
    labels.push_back("s" + std::to_string(i));
  }
  const DistanceMatrix serial = build_distance_matrix(labels, spectra, 1);
  const DistanceMatrix parallel = build_distance_matrix(labels, spectra, 8);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 9; ++j) EXPECT_EQ(serial.at(i, j), parallel.at(i, j));
  }
}

TEST(GeodesicPathFiles, RoundTripPreservesLength) {
  TempDir dir;
  const FrequencyGrid g(512);
  const Psd a = psd_from_ar({0.5}, 1.0, g);
  const Psd b = psd_from_function(g, [](double t) { return std::exp(std::cos(t)); });
  const GeodesicPath path = geodesic_path(a, b, 6);
  write_geodesic_path(path, dir.path() / "morph");
  const GeodesicPath back = read_geodesic_path(dir.path() / "morph");
  ASSERT_EQ(back.points.size(), 6u);
  EXPECT_EQ(back.taus, path.taus);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(back.points[i], path.points[i]);
  EXPECT_NEAR(path_length(back), geodesic_distance(a, b).value(), 1e-10);
  EXPECT_NE(read_text(dir.path() / "morph" / "index.csv").find("index,tau,file"), std::string::npos);
}
