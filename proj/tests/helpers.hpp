#pragma once

// Shared test utilities: relative-error helpers, a quadrature-backed CDF for
// Kolmogorov-Smirnov checks, and self-cleaning temp files.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace test {

using cd = std::complex<double>;

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

inline double rel_err(cd got, cd want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// CDF built by cumulative trapezoid integration of a density on [lo, hi];
// piecewise-linear interpolation between table points.
class TableCdf {
 public:
  TableCdf(const std::function<double(double)>& density, double lo, double hi, int points)
      : lo_(lo), hi_(hi), cum_(static_cast<std::size_t>(points)) {
    const double h = (hi - lo) / (points - 1);
    double prev = density(lo);
    cum_[0] = 0.0;
    for (int i = 1; i < points; ++i) {
      const double cur = density(lo + i * h);
      cum_[static_cast<std::size_t>(i)] =
          cum_[static_cast<std::size_t>(i - 1)] + 0.5 * h * (prev + cur);
      prev = cur;
    }
  }

  double operator()(double x) const {
    if (x <= lo_) return 0.0;
    if (x >= hi_) return cum_.back();
    const double t = (x - lo_) / (hi_ - lo_) * static_cast<double>(cum_.size() - 1);
    const std::size_t i = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(i);
    return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
  }

 private:
  double lo_, hi_;
  std::vector<double> cum_;
};

// sup_x |F_n(x) - F(x)| over the sample points; sample is copied and sorted.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    stat = std::max(stat, std::fabs((static_cast<double>(i) + 1.0) / n - f));
    stat = std::max(stat, std::fabs(f - static_cast<double>(i) / n));
  }
  return stat;
}

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path_ = "/tmp/nvmix_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
    std::ofstream out(path_, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("TempFile: cannot write " + path_);
  }
  TempFile() : TempFile(std::string()) {}
  ~TempFile() { std::remove(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace test
