// Small numeric helpers: intervals, stable log-space arithmetic, quadrature,
// deterministic formatting and hashing. Nothing here knows about metrics.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "imcf/errors.hpp"

namespace imcf {

inline constexpr double kPi = 3.14159265358979323846;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double r) const { return r >= lo && r <= hi; }
  bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo < hi; }
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw BadParamsError("linspace: need at least 2 points");
  std::vector<double> x(n);
  const double h = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + h * double(i);
  x.back() = b;  // endpoint exact
  return x;
}

// log(1 - exp(x)) for x < 0, stable near both ends.
inline double log1mexp(double x) {
  if (!(x < 0.0)) return -std::numeric_limits<double>::infinity();
  static const double kLn2 = 0.6931471805599453;
  return x > -kLn2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

// log(e^a + e^b)
inline double logsumexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log(e^a - e^b), requires a > b
inline double logdiffexp(double a, double b) {
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + log1mexp(b - a);
}

// Composite Simpson with n panels (forced even) on a callable.
inline double simpson(const std::function<double(double)>& g, double a, double b, std::size_t n) {
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / double(n);
  double s = g(a) + g(b);
  for (std::size_t i = 1; i < n; ++i) s += g(a + h * double(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Polynomial extrapolation of (x_i, y_i) to x = 0 (Neville).
inline double extrapolate_to_zero(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) throw BadParamsError("extrapolate_to_zero: bad tables");
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = 0; i + level < n; ++i)
      y[i] = y[i + 1] + (y[i + 1] - y[i]) * x[i + level] / (x[i] - x[i + level]);
  return y[0];
}

// 17 significant digits: round-trips every double, byte-stable across runs.
inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// FNV-1a 64-bit over bytes; used for metric digests in manifests.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace imcf
