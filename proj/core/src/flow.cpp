#include "imcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "imcf/errors.hpp"
#include "imcf/numeric.hpp"

namespace imcf {

std::vector<double> forward_infimum(const std::vector<double>& v) {
  std::vector<double> m(v.size());
  if (v.empty()) return m;
  double run = v.back();
  for (std::size_t i = v.size(); i-- > 0;) {
    run = std::min(run, v[i]);
    m[i] = run;
  }
  return m;
}

namespace {

struct GridData {
  std::vector<double> grid, f, m;
};

GridData sample_metric(const WarpFactor& f, double r_init, std::size_t grid_n) {
  if (grid_n < 2) throw BadParamsError("grid_n must be at least 2");
  if (!(r_init > f.r_min()) || !(r_init < f.r_max()))
    throw BadParamsError("r_init must be interior to the domain");
  GridData d;
  d.grid = linspace(r_init, f.r_max(), grid_n);
  d.f.reserve(grid_n);
  for (double r : d.grid) {
    const double v = f.value(r);
    if (!(v > 0.0)) throw BadParamsError("f must be positive on [r_init, r_max]");
    d.f.push_back(v);
  }
  d.m = forward_infimum(d.f);
  return d;
}

std::size_t hull_index_of(const GridData& d) {
  const double m0 = d.m[0];
  std::size_t idx = 0;
  for (std::size_t i = d.f.size(); i-- > 0;) {
    if (d.f[i] <= m0) { idx = i; break; }
  }
  if (idx + 1 == d.f.size())
    throw HullEscapesError("outward-minimizing hull reaches r_max; enlarge the domain");
  return idx;
}

}  // namespace

double hull(const WarpFactor& f, double r_init, std::size_t grid_n) {
  const GridData d = sample_metric(f, r_init, grid_n);
  return d.grid[hull_index_of(d)];
}

FlowSolution solve_weak_imcf(const WarpFactor& f, double r_init, std::size_t grid_n) {
  GridData d = sample_metric(f, r_init, grid_n);
  FlowSolution sol{f, std::move(d.grid), std::move(d.f), std::move(d.m), {}, {}, r_init, 0.0, 0, {}};
  const std::size_t n = sol.grid.size();
  sol.hull_index = hull_index_of({sol.grid, sol.f, sol.m});
  sol.r_hull = sol.grid[sol.hull_index];

  const double m0 = sol.m[0];
  sol.u.resize(n);
  sol.in_jump.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.u[i] = 2.0 * std::log(sol.m[i] / m0);  // exactly 0 wherever m_i = m_0
    sol.in_jump[i] = sol.f[i] > sol.m[i] ? 1 : 0;
  }

  // Jumps are maximal constant-m runs containing a node with f > m.
  for (std::size_t s = 0; s + 1 < n;) {
    std::size_t e = s;
    while (e + 1 < n && sol.m[e + 1] == sol.m[s]) ++e;
    if (e > s) {
      bool has_jump = false;
      for (std::size_t j = s; j <= e && !has_jump; ++j) has_jump = sol.in_jump[j] != 0;
      if (has_jump) sol.jumps.push_back({sol.grid[s], sol.grid[e], s, e});
    }
    s = e + 1;
  }
  return sol;
}

namespace {

// Index of the largest grid node with u <= t.
std::size_t level_index(const FlowSolution& sol, double t) {
  if (!(t >= 0.0)) throw BadParamsError("level time must be nonnegative");
  if (t > sol.u_max())
    throw FlowExitedError("level set beyond the truncated domain; enlarge r_max");
  auto it = std::upper_bound(sol.u.begin(), sol.u.end(), t);
  return static_cast<std::size_t>(it - sol.u.begin()) - 1;
}

}  // namespace

double level_radius(const FlowSolution& sol, double t) {
  return sol.grid[level_index(sol, t)];
}

double level_radius_interp(const FlowSolution& sol, double t) {
  const std::size_t i = level_index(sol, t);
  if (i + 1 == sol.grid.size()) return sol.grid.back();
  const double du = sol.u[i + 1] - sol.u[i];  // positive: u[i+1] > t >= u[i]
  return sol.grid[i] + (sol.grid[i + 1] - sol.grid[i]) * (t - sol.u[i]) / du;
}

double grad_u(const FlowSolution& sol, double r) {
  if (r < sol.grid.front() - 1e-12 || r > sol.grid.back() + 1e-12)
    throw DomainMismatchError("grad_u: radius outside the flow grid");
  if (r <= sol.r_hull) return 0.0;
  const double h = sol.step();
  std::size_t i = static_cast<std::size_t>(std::min(
      std::max((r - sol.grid.front()) / h, 0.0), static_cast<double>(sol.grid.size() - 2)));
  const double dm = sol.m[i + 1] - sol.m[i];
  if (dm == 0.0) return 0.0;
  const double ds = h * sol.metric.arc_jacobian(0.5 * (sol.grid[i] + sol.grid[i + 1]));
  return 2.0 * dm / (ds * sol.m[i]);
}

void to_csv(const FlowSolution& sol, std::ostream& out) {
  out << "r,f,m,u,in_jump\n";
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    out << format_g17(sol.grid[i]) << ',' << format_g17(sol.f[i]) << ','
        << format_g17(sol.m[i]) << ',' << format_g17(sol.u[i]) << ','
        << int(sol.in_jump[i]) << '\n';
  }
}

}  // namespace imcf
