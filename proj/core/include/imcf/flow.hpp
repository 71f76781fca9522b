// Weak inverse mean curvature flow from a coordinate ball, in closed form:
// with m the forward-infimum envelope of f the solution is
// u(r) = 2 log(m(r) / m(r_init)), zero through the outward-minimizing hull
// and constant across jump intervals (where f > m). The grid is uniform on
// [r_init, r_max] in the metric's stored coordinate.
#pragma once

#include <iosfwd>
#include <vector>

#include "imcf/warp_factor.hpp"

namespace imcf {

struct JumpInterval {
  double a = 0.0, b = 0.0;       // radii bracketing the jump (f = m at b)
  std::size_t ia = 0, ib = 0;    // grid indices of a and b
};

struct FlowSolution {
  WarpFactor metric;
  std::vector<double> grid;      // r_0 = r_init < ... < r_{N-1} = r_max
  std::vector<double> f;         // f(r_i)
  std::vector<double> m;         // envelope min_{j >= i} f_j
  std::vector<double> u;         // 2 log(m_i / m_0)
  std::vector<unsigned char> in_jump;  // f_i > m_i
  double r_init = 0.0;
  double r_hull = 0.0;
  std::size_t hull_index = 0;    // largest i with f_i = m_0
  std::vector<JumpInterval> jumps;

  double step() const { return grid[1] - grid[0]; }
  double u_max() const { return u.back(); }
};

// m_i = min_{j >= i} v_j by one backward sweep.
std::vector<double> forward_infimum(const std::vector<double>& v);

// Largest grid radius s >= r_init with f(s) <= m(r_init); ties toward the
// largest radius. HullEscapes when that radius is r_max.
double hull(const WarpFactor& f, double r_init, std::size_t grid_n = 4096);

FlowSolution solve_weak_imcf(const WarpFactor& f, double r_init, std::size_t grid_n);

// Largest grid radius with u <= t (right endpoint of {u <= t}).
double level_radius(const FlowSolution& sol, double t);

// Continuum level radius: solves m(rho) = m_0 e^{t/2} by in-cell linear
// interpolation of u; right-continuous at jump times. Used by quadratures.
double level_radius_interp(const FlowSolution& sol, double t);

// |grad u| at radius r: 2 m'/m with m' the one-sided (forward) difference in
// arc length; exactly 0 inside jump intervals and left of the hull.
double grad_u(const FlowSolution& sol, double r);

void to_csv(const FlowSolution& sol, std::ostream& out);  // r, f, m, u, in_jump

}  // namespace imcf
