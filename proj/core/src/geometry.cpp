#include "imcf/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace imcf {

double mean_curvature(const WarpFactor& f, double r, Side side) {
  const double fr = f.value(r);
  if (!(fr > 0.0)) throw BadParamsError("mean_curvature: f(r) must be positive");
  return 2.0 * f.deriv(r, side) / fr;
}

double scalar_curvature(const WarpFactor& f, double r, Side side) {
  const double fr = f.value(r);
  if (!(fr > 0.0)) throw BadParamsError("scalar_curvature: f(r) must be positive");
  const double fp = f.deriv(r, side);
  const double fpp = f.second_deriv(r, side);
  return -4.0 * fpp / fr + 2.0 * (1.0 - fp * fp) / (fr * fr);
}

double min_scalar_curvature(const WarpFactor& f, Interval range, std::size_t samples) {
  if (!(range.valid()) || !f.domain().contains(range.lo) || !f.domain().contains(range.hi))
    throw DomainMismatchError("min_scalar_curvature: range not inside the domain");
  double lo = std::numeric_limits<double>::infinity();
  for (double r : linspace(range.lo, range.hi, std::max<std::size_t>(samples, 2))) {
    if (f.is_kink(r)) continue;  // kinks handled below, both sides
    lo = std::min(lo, scalar_curvature(f, r, Side::unspecified));
  }
  for (double k : f.kink_radii()) {
    if (k < range.lo || k > range.hi) continue;
    lo = std::min(lo, scalar_curvature(f, k, Side::left));
    lo = std::min(lo, scalar_curvature(f, k, Side::right));
  }
  return lo;
}

MollifyResult mollify(const WarpFactor& f, double eps) {
  WarpFactor smoothed = WarpFactor::mollified(f, eps);
  return {smoothed, sup_distance(f, smoothed, f.domain())};
}

double sup_distance(const WarpFactor& f, const WarpFactor& g, Interval range, std::size_t grid_n) {
  if (!range.valid()) throw EmptyRangeError("sup_distance: empty range");
  if (!f.domain().contains(range.lo) || !f.domain().contains(range.hi) ||
      !g.domain().contains(range.lo) || !g.domain().contains(range.hi))
    throw DomainMismatchError("sup_distance: range not covered by both domains");
  double worst = 0.0;
  for (double r : linspace(range.lo, range.hi, std::max<std::size_t>(grid_n, 2))) {
    const double a = f.value(r), b = g.value(r);
    const double d1 = std::abs(a - b);
    const double denom = std::max(a * a, b * b);
    const double d2 = denom > 0.0 ? std::abs(a * a - b * b) / denom : 0.0;
    worst = std::max({worst, d1, d2});
  }
  return worst;
}

double isoperimetric_constant_radial(const WarpFactor& f, Interval range, std::size_t grid_n) {
  if (!range.valid() || range.lo <= f.r_min() || range.hi > f.r_max() + 1e-12)
    throw EmptyRangeError("isoperimetric_constant_radial: range must lie in (r_min, r_max]");
  const std::size_t n = std::max<std::size_t>(grid_n, 8);
  const auto grid = linspace(f.r_min(), range.hi, n);
  auto vol_density = [&](double r) { return 4.0 * kPi * f.value(r) * f.value(r) * f.arc_jacobian(r); };
  double best = std::numeric_limits<double>::infinity();
  double vol = 0.0;
  double prev_g = vol_density(grid[0]);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = grid[i] - grid[i - 1];
    const double gm = vol_density(0.5 * (grid[i - 1] + grid[i]));
    const double gi = vol_density(grid[i]);
    vol += h / 6.0 * (prev_g + 4.0 * gm + gi);  // per-cell Simpson
    prev_g = gi;
    if (grid[i] < range.lo || vol <= 0.0) continue;
    const double area = 4.0 * kPi * f.value(grid[i]) * f.value(grid[i]);
    best = std::min(best, std::pow(area, 1.5) / vol);
  }
  if (!std::isfinite(best)) throw EmptyRangeError("isoperimetric_constant_radial: no sample radii in range");
  return best;
}

MetricSequence MetricSequence::mollified_family(const WarpFactor& target,
                                                const std::vector<double>& eps_list,
                                                Interval range) {
  MetricSequence seq{{}, target, range, {}};
  for (double eps : eps_list) {
    seq.members.push_back(WarpFactor::mollified(target, eps));
    seq.distances.push_back(sup_distance(seq.members.back(), target, range));
  }
  return seq;
}

}  // namespace imcf
