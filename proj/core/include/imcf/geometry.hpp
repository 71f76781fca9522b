// Curvature of warped-product metrics, C0 distances, mollification and the
// radial isoperimetric estimate. Coordinate spheres at radius r have area
// 4 pi f(r)^2, mean curvature H = 2 f'/f and the slice metric has
// Scal = -4 f''/f + 2 (1 - f'^2)/f^2 (arc-length derivatives).
#pragma once

#include <vector>

#include "imcf/warp_factor.hpp"

namespace imcf {

double mean_curvature(const WarpFactor& f, double r, Side side = Side::unspecified);
double scalar_curvature(const WarpFactor& f, double r, Side side = Side::unspecified);

// Smallest sampled scalar curvature over [range.lo, range.hi]; kinks are
// sampled one-sided from both sides.
double min_scalar_curvature(const WarpFactor& f, Interval range, std::size_t samples = 2048);

struct MollifyResult {
  WarpFactor metric;     // smooth, same domain
  double sup_distance;   // reported C0 distance to the input on the domain
};
MollifyResult mollify(const WarpFactor& f, double eps);

// max over >= grid_n points of max(|f-g|, |f^2-g^2| / max(f^2, g^2)); the
// second term is symmetrized so the result is a pseudometric.
double sup_distance(const WarpFactor& f, const WarpFactor& g, Interval range,
                    std::size_t grid_n = 10001);

// inf over radial balls B_r, r in range, of |dB_r|^{3/2} / |B_r|, volumes
// measured from r_min; radial competitors only, so this upper-bounds the
// true isoperimetric constant.
double isoperimetric_constant_radial(const WarpFactor& f, Interval range,
                                     std::size_t grid_n = 4096);

struct MetricSequence {
  std::vector<WarpFactor> members;
  WarpFactor target;
  Interval range;
  std::vector<double> distances;  // sup_distance(member, target, range)

  static MetricSequence mollified_family(const WarpFactor& target,
                                         const std::vector<double>& eps_list, Interval range);
};

}  // namespace imcf
