#include "imcf/hawking.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "imcf/geometry.hpp"
#include "imcf/numeric.hpp"

namespace imcf {

namespace {

// Flow data resampled on the grid refined by the kink radii, with the
// envelope retaken over the refined nodes. Level inversion, bulk prefix
// sums and kink-crossing times all live on this one structure, so the two
// sides of the coarea identity see the same discrete geometry. On a
// piecewise linear metric every segment integrand is constant and the
// quadrature is exact.
struct Refined {
  std::vector<double> x, u;       // nodes and flow values
  std::vector<double> g;          // per-segment |grad u| (arc length)
  std::vector<double> cum;        // cum[i] = bulk integral over segments < i
  std::vector<std::pair<double, double>> kink_t;  // (time, radius), t > 0
  double step = 0.0;              // underlying uniform grid step
};

Refined refine(const FlowSolution& sol, const WarpFactor& f) {
  Refined R;
  R.step = sol.step();
  const std::size_t n = sol.grid.size();
  std::vector<double> kinks;
  for (double k : f.kink_radii())
    if (k > sol.grid.front() && k < sol.grid.back()) kinks.push_back(k);
  std::sort(kinks.begin(), kinks.end());

  std::vector<double> fv;
  std::vector<std::size_t> kink_idx;
  R.x.reserve(n + kinks.size());
  fv.reserve(n + kinks.size());
  std::size_t kp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (kp < kinks.size() && kinks[kp] < sol.grid[i]) {
      if (kinks[kp] - R.x.back() > 1e-12 * (1.0 + std::abs(kinks[kp])) &&
          sol.grid[i] - kinks[kp] > 1e-12 * (1.0 + std::abs(kinks[kp]))) {
        kink_idx.push_back(R.x.size());
        R.x.push_back(kinks[kp]);
        fv.push_back(f.value(kinks[kp]));
      }
      ++kp;
    }
    R.x.push_back(sol.grid[i]);
    fv.push_back(sol.f[i]);
  }

  const std::vector<double> m = forward_infimum(fv);
  const std::size_t nn = R.x.size();
  R.u.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) R.u[i] = 2.0 * std::log(m[i] / m[0]);

  R.g.assign(nn - 1, 0.0);
  R.cum.assign(nn, 0.0);
  for (std::size_t i = 0; i + 1 < nn; ++i) {
    double c = 0.0;
    if (R.u[i + 1] > R.u[i]) {
      const double mid = 0.5 * (R.x[i] + R.x[i + 1]);
      const double ds = (R.x[i + 1] - R.x[i]) * f.arc_jacobian(mid);
      R.g[i] = (R.u[i + 1] - R.u[i]) / ds;
      const double fm = f.value(mid);
      c = ds * std::exp(0.25 * (R.u[i] + R.u[i + 1])) * R.g[i] * R.g[i] * R.g[i] *
          4.0 * kPi * fm * fm;
    }
    R.cum[i + 1] = R.cum[i] + c;
  }
  for (std::size_t j : kink_idx)
    if (R.u[j] > 0.0) R.kink_t.push_back({R.u[j], R.x[j]});
  return R;
}

// Index of the largest refined node with u <= t.
std::size_t refined_index(const Refined& R, double t) {
  if (!(t >= 0.0)) throw BadParamsError("level time must be nonnegative");
  if (t > R.u.back())
    throw FlowExitedError("level set beyond the truncated domain; enlarge r_max");
  auto it = std::upper_bound(R.u.begin(), R.u.end(), t);
  return static_cast<std::size_t>(it - R.u.begin()) - 1;
}

double refined_rho(const Refined& R, double t) {
  const std::size_t i = refined_index(R, t);
  if (i + 1 == R.x.size()) return R.x.back();
  return R.x[i] + (R.x[i + 1] - R.x[i]) * (t - R.u[i]) / (R.u[i + 1] - R.u[i]);
}

double refined_bulk(const Refined& R, const WarpFactor& f, double t) {
  const std::size_t i = refined_index(R, t);
  double total = R.cum[i];
  if (i + 1 < R.x.size() && R.g[i] > 0.0) {
    const double xt = R.x[i] + (R.x[i + 1] - R.x[i]) * (t - R.u[i]) / (R.u[i + 1] - R.u[i]);
    if (xt > R.x[i]) {
      const double mid = 0.5 * (R.x[i] + xt);
      const double fm = f.value(mid);
      total += (xt - R.x[i]) * f.arc_jacobian(mid) *
               std::exp(0.25 * (R.u[i] + t)) * R.g[i] * R.g[i] * R.g[i] *
               4.0 * kPi * fm * fm;
    }
  }
  return total;
}

double surface_willmore(const Refined& R, const WarpFactor& f, double t, Side side) {
  double rho = refined_rho(R, t);
  Side eval_side = Side::unspecified;
  const double snap = std::max(1e-7 * (1.0 + std::abs(rho)), 0.9 * R.step);
  for (double k : f.kink_radii()) {
    if (std::abs(rho - k) <= snap) {
      rho = k;
      eval_side = side == Side::unspecified ? Side::right : side;
      break;
    }
  }
  const double fr = f.value(rho);
  const double H = 2.0 * f.deriv(rho, eval_side) / fr;
  return 4.0 * kPi * fr * fr * H * H;
}

double mh_from_willmore(double t, double w) { return std::exp(0.5 * t) * (16.0 * kPi - w); }

}  // namespace

double willmore(const FlowSolution& sol, const WarpFactor& f, double t, Side side) {
  return surface_willmore(refine(sol, f), f, t, side);
}

double hawking_mass(const FlowSolution& sol, const WarpFactor& f, double t, Side side) {
  return mh_from_willmore(t, willmore(sol, f, t, side));
}

double bulk_integral(const FlowSolution& sol, const WarpFactor& f, double t) {
  return refined_bulk(refine(sol, f), f, t);
}

HawkingTrace hawking_trace(const FlowSolution& sol, const WarpFactor& f,
                           const std::vector<double>& t_samples) {
  const Refined R = refine(sol, f);
  HawkingTrace tr;
  tr.area0 = 4.0 * kPi * sol.m[0] * sol.m[0];
  tr.c0 = std::sqrt(tr.area0 / (16.0 * kPi)) / (16.0 * kPi);
  for (double t : t_samples) {
    const double w = surface_willmore(R, f, t, Side::right);
    tr.times.push_back(t);
    tr.level.push_back(refined_rho(R, t));
    tr.area.push_back(tr.area0 * std::exp(t));
    tr.willmore.push_back(w);
    tr.mh.push_back(mh_from_willmore(t, w));
  }
  return tr;
}

void to_csv(const HawkingTrace& tr, std::ostream& out) {
  out << "t,r_t,area,willmore,m_H\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out << format_g17(tr.times[i]) << ',' << format_g17(tr.level[i]) << ','
        << format_g17(tr.area[i]) << ',' << format_g17(tr.willmore[i]) << ','
        << format_g17(tr.mh[i]) << '\n';
  }
}

CriterionReport criterion(const FlowSolution& sol, const WarpFactor& f,
                          double boundary_willmore, const std::vector<double>& t_samples,
                          double tol_base) {
  if (t_samples.empty()) throw BadParamsError("criterion: no sample times");
  const Refined R = refine(sol, f);
  CriterionReport rep;
  rep.boundary_willmore = boundary_willmore;
  rep.min_margin = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  for (double t : t_samples) {
    const double G = 32.0 * kPi * std::expm1(0.5 * t) - refined_bulk(R, f, t) -
                     t * (16.0 * kPi - boundary_willmore);
    rep.times.push_back(t);
    rep.margin.push_back(G);
    rep.min_margin = std::min(rep.min_margin, G);
    t_max = std::max(t_max, t);
  }
  rep.tolerance = tol_base * (1.0 + 32.0 * kPi * std::exp(0.5 * t_max));
  rep.pass = rep.min_margin >= -rep.tolerance;
  return rep;
}

void to_csv(const CriterionReport& rep, std::ostream& out) {
  out << "t,G\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    out << format_g17(rep.times[i]) << ',' << format_g17(rep.margin[i]) << '\n';
}

nlohmann::json to_json(const CriterionReport& rep, const std::string& metric_digest) {
  return nlohmann::json{{"verdict", rep.pass ? "pass" : "fail"},
                        {"min_margin", rep.min_margin},
                        {"tolerance", rep.tolerance},
                        {"boundary_willmore", rep.boundary_willmore},
                        {"samples", rep.times.size()},
                        {"metric_digest", metric_digest}};
}

double integrated_inequality(const FlowSolution& sol, const WarpFactor& f, double T,
                             double boundary_willmore, std::size_t min_samples) {
  if (!(T > 0.0)) throw BadParamsError("integrated_inequality: T must be positive");
  const Refined R = refine(sol, f);

  // m_H is smooth between kink crossings and jumps; split the Simpson
  // panels there and evaluate one-sided limits at panel ends.
  std::vector<double> breaks{0.0, T};
  for (const auto& [tk, rk] : R.kink_t)
    if (tk > 0.0 && tk < T) breaks.push_back(tk);
  for (std::size_t i = 0; i + 1 < R.u.size(); ++i)
    if (R.u[i] > 0.0 && R.u[i] < T && R.u[i + 1] == R.u[i]) breaks.push_back(R.u[i]);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               breaks.end());

  auto mh_at = [&](double t, Side side) {
    return mh_from_willmore(t, surface_willmore(R, f, t, side));
  };

  double integral = 0.0;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    std::size_t nsub = static_cast<std::size_t>(std::ceil(
        static_cast<double>(min_samples) * (b - a) / T));
    nsub = std::max<std::size_t>(nsub + (nsub % 2), 4);
    const double h = (b - a) / static_cast<double>(nsub);
    double s = mh_at(a, Side::right) + mh_at(b, Side::left);
    for (std::size_t k = 1; k < nsub; ++k) {
      const double t = a + h * static_cast<double>(k);
      const Side hint = (t - a < b - t) ? Side::right : Side::left;
      s += (k % 2 ? 4.0 : 2.0) * mh_at(t, hint);
    }
    integral += s * h / 3.0;
  }
  return integral - T * (16.0 * kPi - boundary_willmore);
}

GerochReport geroch_check(const FlowSolution& sol, const WarpFactor& f,
                          const std::vector<double>& t_samples) {
  if (t_samples.size() < 2) throw BadParamsError("geroch_check: need at least two samples");
  const HawkingTrace tr = hawking_trace(sol, f, t_samples);
  GerochReport rep;
  double scale = 0.0;
  for (double v : tr.mh) scale = std::max(scale, std::abs(v));
  rep.tolerance = 1e-6 * (1.0 + scale);
  rep.nondecreasing = true;
  for (std::size_t k = 0; k + 1 < tr.mh.size(); ++k) {
    const double diff = tr.mh[k + 1] - tr.mh[k];
    rep.worst_drop = std::min(rep.worst_drop, diff);
    if (diff < -rep.tolerance && rep.nondecreasing) {
      rep.nondecreasing = false;
      rep.first_violation_t = tr.times[k + 1];
    }
  }
  return rep;
}

std::pair<double, double> mh_derivative_identity(const WarpFactor& f, double r) {
  const double fr = f.value(r);
  if (!(f.deriv(r) > 0.0))
    throw NonMeanConvexError("mh_derivative_identity: sphere must be mean convex");
  const double rhs = 4.0 * kPi * fr * fr * scalar_curvature(f, r);

  auto rho_at = [&](double target) {
    double rho = r;
    for (int it = 0; it < 60; ++it) {
      const double slope = f.deriv(rho) * f.arc_jacobian(rho);  // df/dr
      const double step = (f.value(rho) - target) / slope;
      rho -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(rho))) break;
    }
    return rho;
  };
  auto mh_at = [&](double tau) {
    const double rho = rho_at(fr * std::exp(0.5 * tau));
    const double fv = f.value(rho);
    const double H = 2.0 * f.deriv(rho) / fv;
    return std::exp(0.5 * tau) * (16.0 * kPi - 4.0 * kPi * fv * fv * H * H);
  };
  const double dt = 1e-3;
  const double lhs = (mh_at(dt) - mh_at(-dt)) / (2.0 * dt);
  return {lhs, rhs};
}

double recover_scalar_at_pole(const WarpFactor& f) {
  if (!f.pole_closed())
    throw BadParamsError("recover_scalar_at_pole: metric must close at the pole");
  const std::vector<double> radii{0.1, 0.05, 0.025};
  std::vector<double> x, y;
  for (double R : radii) {
    x.push_back(R * R);
    y.push_back(scalar_curvature(f, R));
  }
  return extrapolate_to_zero(x, y);
}

}  // namespace imcf
