#include "imcf/p_approx.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "imcf/numeric.hpp"

namespace imcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of int_a^b f^{-beta} ds for f linear on [a, b], computed entirely in
// log space: f^{-beta} underflows long before p reaches 1.
double log_cell(const WarpFactor& f, double a, double b, double fa, double fb,
                double beta) {
  const double jac = f.arc_jacobian(0.5 * (a + b));
  const double base = std::log(b - a) + std::log(jac);
  if (std::abs(fb - fa) <= 1e-9 * std::max(fa, fb))
    return base - beta * std::log(0.5 * (fa + fb));
  const double lo = std::min(fa, fb), hi = std::max(fa, fb);
  return base - std::log(hi - lo) - std::log(beta - 1.0) +
         logdiffexp((1.0 - beta) * std::log(lo), (1.0 - beta) * std::log(hi));
}

struct RawProfile {
  std::vector<double> r, logw;  // logw.back() = -inf
};

RawProfile raw_profile(const WarpFactor& f, double r_init, double p, double r_max,
                       std::size_t grid_n) {
  if (!(p > 1.0) || !(p < 3.0)) throw BadParamsError("p must lie in (1, 3)");
  if (grid_n < 2) throw BadParamsError("grid_n must be at least 2");
  if (!(r_init > f.r_min()) || !(r_init < r_max) || r_max > f.r_max() + 1e-12)
    throw BadParamsError("integration range must satisfy r_min < r_init < r_max <= domain end");
  const double beta = 2.0 / (p - 1.0);

  RawProfile prof;
  prof.r = linspace(r_init, std::min(r_max, f.r_max()), grid_n);
  std::vector<double> fv(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    fv[i] = f.value(prof.r[i]);
    if (!(fv[i] > 0.0))
      throw IntegralDivergesError("p-integrand is non-integrable where f vanishes");
  }

  const auto kinks = f.kink_radii();
  std::vector<double> logcell(grid_n - 1);
  for (std::size_t i = 0; i + 1 < grid_n; ++i) {
    double a = prof.r[i], fa = fv[i];
    double acc = -kInf;
    for (double k : kinks) {
      if (k <= a + 1e-12 || k >= prof.r[i + 1] - 1e-12) continue;
      const double fk = f.value(k);
      acc = logsumexp(acc, log_cell(f, a, k, fa, fk, beta));
      a = k;
      fa = fk;
    }
    logcell[i] = logsumexp(acc, log_cell(f, a, prof.r[i + 1], fa, fv[i + 1], beta));
  }

  prof.logw.assign(grid_n, -kInf);  // tails relative to nothing yet
  for (std::size_t i = grid_n - 1; i-- > 0;)
    prof.logw[i] = logsumexp(prof.logw[i + 1], logcell[i]);
  const double total = prof.logw[0];
  for (double& lw : prof.logw) lw -= total;  // log w, with w(r_init) = 1
  return prof;
}

}  // namespace

PFlowProfile p_harmonic_radial(const WarpFactor& f, double r_init, double p,
                               double r_max, std::size_t grid_n) {
  const RawProfile raw = raw_profile(f, r_init, p, r_max, grid_n);
  PFlowProfile prof;
  prof.p = p;
  prof.r = raw.r;
  for (double lw : raw.logw) {
    prof.w.push_back(std::exp(lw));
    prof.u_p.push_back(-(p - 1.0) * lw);  // +inf at r_max
  }

  // Truncation: recompute with the cutoff moved (doubled range when the
  // domain allows, halved otherwise) and compare away from the cutoff.
  const double len = r_max - r_init;
  double alt = std::min(f.r_max(), r_init + 2.0 * len);
  double compare_hi = r_init + 0.5 * len;
  if (!(alt > r_max + 1e-9 * len)) {
    alt = r_init + 0.5 * len;
    compare_hi = r_init + 0.25 * len;
  }
  const std::size_t alt_n = std::max<std::size_t>(
      static_cast<std::size_t>(std::llround((alt - r_init) / len * static_cast<double>(grid_n - 1))) + 1, 8);
  const RawProfile other = raw_profile(f, r_init, p, alt, alt_n);
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < prof.r.size(); ++i) {
    if (prof.r[i] > compare_hi) break;
    while (j + 1 < other.r.size() && other.r[j + 1] < prof.r[i]) ++j;
    const double span = other.r[j + 1] - other.r[j];
    const double s = (prof.r[i] - other.r[j]) / span;
    const double lw = (1.0 - s) * other.logw[j] + s * other.logw[j + 1];
    worst = std::max(worst, std::abs(-(p - 1.0) * lw - prof.u_p[i]));
  }
  prof.truncation_estimate = worst;
  return prof;
}

double p_laplace_residual(const PFlowProfile& prof, const WarpFactor& f) {
  const std::size_t n = prof.r.size();
  if (n < 3) throw BadParamsError("p_laplace_residual: grid too small");
  const auto kinks = f.kink_radii();
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    bool kinked = false;
    for (double k : kinks)
      if (k > prof.r[i] - 1e-12 && k < prof.r[i + 1] + 1e-12) kinked = true;
    if (kinked) continue;  // no classical equation across a kink
    if (!(prof.w[i] > prof.w[i + 1]) || prof.w[i] <= 0.0) continue;
    const double mid = 0.5 * (prof.r[i] + prof.r[i + 1]);
    const double fm = f.value(mid);
    const double ds = (prof.r[i + 1] - prof.r[i]) * f.arc_jacobian(mid);
    const double logflux = 2.0 * std::log(fm) +
                           (prof.p - 1.0) * (std::log(prof.w[i] - prof.w[i + 1]) - std::log(ds));
    lo = std::min(lo, logflux);
    hi = std::max(hi, logflux);
  }
  if (!(hi >= lo)) throw EmptyRangeError("p_laplace_residual: no usable cells");
  return std::expm1(hi - lo);
}

PLimitReport p_limit(const WarpFactor& f, double r_init, const std::vector<double>& p_list,
                     Interval compact_range, double r_max, std::size_t grid_n) {
  if (p_list.empty()) throw BadParamsError("p_limit: empty p list");
  if (!compact_range.valid() || compact_range.lo < r_init || compact_range.hi >= r_max)
    throw BadParamsError("p_limit: compact range must sit inside [r_init, r_max)");
  const FlowSolution env = solve_weak_imcf(f, r_init, grid_n);
  auto env_u = [&](double r) {
    const double h = env.step();
    const std::size_t i = static_cast<std::size_t>(std::min(
        std::max((r - env.grid.front()) / h, 0.0), static_cast<double>(env.grid.size() - 2)));
    const double s = (r - env.grid[i]) / h;
    return (1.0 - s) * env.u[i] + s * env.u[i + 1];
  };

  PLimitReport rep;
  rep.p_list = p_list;
  for (double p : p_list) {
    const PFlowProfile prof = p_harmonic_radial(f, r_init, p, r_max, grid_n);
    double d = 0.0;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
      if (prof.r[i] < compact_range.lo || prof.r[i] > compact_range.hi) continue;
      d = std::max(d, std::abs(prof.u_p[i] - env_u(prof.r[i])));
    }
    rep.distances.push_back(d);
  }
  rep.nonincreasing = true;
  for (std::size_t k = 0; k + 1 < rep.distances.size(); ++k)
    if (rep.distances[k + 1] > rep.distances[k] + 1e-12 * (1.0 + rep.distances[k]))
      rep.nonincreasing = false;
  rep.final_distance = rep.distances.back();
  return rep;
}

HarnackReport harnack_oscillation_check(const WarpFactor& f, double r_init,
                                        const std::vector<double>& p_list, Interval K,
                                        double r_max, std::size_t grid_n, double bound) {
  if (p_list.empty()) throw BadParamsError("harnack_oscillation_check: empty p list");
  if (!K.valid() || K.lo <= r_init || K.hi >= r_max)
    throw BadParamsError("harnack_oscillation_check: K must be compact in (r_init, r_max)");
  HarnackReport rep;
  rep.p_list = p_list;
  for (double p : p_list) {
    const PFlowProfile prof = p_harmonic_radial(f, r_init, p, r_max, grid_n);
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
      if (prof.r[i] < K.lo || prof.r[i] > K.hi) continue;
      lo = std::min(lo, prof.u_p[i]);
      hi = std::max(hi, prof.u_p[i]);
    }
    if (!(hi >= lo)) throw EmptyRangeError("harnack_oscillation_check: no grid nodes in K");
    rep.osc.push_back(hi - lo);
    rep.sup_osc = std::max(rep.sup_osc, hi - lo);
  }
  if (bound < 0.0) {
    const FlowSolution env = solve_weak_imcf(f, r_init, grid_n);
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < env.grid.size(); ++i) {
      if (env.grid[i] < K.lo || env.grid[i] > K.hi) continue;
      lo = std::min(lo, env.u[i]);
      hi = std::max(hi, env.u[i]);
    }
    bound = (hi >= lo ? hi - lo : 0.0) + 1e-6;
  }
  rep.bound = bound;
  rep.uniform = rep.sup_osc <= rep.bound;
  return rep;
}

void to_csv(const PLimitReport& rep, const HarnackReport& h, std::ostream& out) {
  if (rep.p_list.size() != h.p_list.size())
    throw BadParamsError("to_csv: reports cover different p lists");
  out << "p,sup_distance,osc_K\n";
  for (std::size_t i = 0; i < rep.p_list.size(); ++i) {
    out << format_g17(rep.p_list[i]) << ',' << format_g17(rep.distances[i]) << ','
        << format_g17(h.osc[i]) << '\n';
  }
}

}  // namespace imcf
