// Hawking-mass traces along the weak flow and the nonnegative-scalar-
// curvature criterion
//   G(t) = 32 pi (e^{t/2} - 1) - int_{u<=t} e^{u/2}|grad u|^3 dmu
//          - t (16 pi - int_{dE} phi^2 dsigma)  >=  0  for all t.
// Surface quantities are right-continuous at jump times and use the outside
// derivative at kinks unless a side is requested.
#pragma once

#include <iosfwd>
#include <vector>

#include "imcf/flow.hpp"

namespace imcf {

double willmore(const FlowSolution& sol, const WarpFactor& f, double t,
                Side side = Side::right);

// m_H(t) = e^{t/2} (16 pi - willmore(t)); proportional to the geometric
// Hawking mass via c0 = sqrt(area_0 / 16 pi) / (16 pi).
double hawking_mass(const FlowSolution& sol, const WarpFactor& f, double t,
                    Side side = Side::right);

// int_{u <= t} e^{u/2} |grad u|^3 dmu, trapezoid over grid cells split at
// kinks and at the level radius; jump intervals contribute nothing.
double bulk_integral(const FlowSolution& sol, const WarpFactor& f, double t);

struct HawkingTrace {
  std::vector<double> times, level, area, willmore, mh;
  double area0 = 0.0;
  double c0 = 0.0;  // normalization to the geometric Hawking mass
};
HawkingTrace hawking_trace(const FlowSolution& sol, const WarpFactor& f,
                           const std::vector<double>& t_samples);
void to_csv(const HawkingTrace& tr, std::ostream& out);  // t, r_t, area, willmore, m_H

struct CriterionReport {
  std::vector<double> times, margin;  // margin_k = G(t_k)
  double min_margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double boundary_willmore = 0.0;
};
// boundary_willmore = int_{dE} phi^2 dsigma from the variational module, or
// 4 pi f^2 H^2 at r_init for smooth boundaries.
CriterionReport criterion(const FlowSolution& sol, const WarpFactor& f,
                          double boundary_willmore, const std::vector<double>& t_samples,
                          double tol_base = 1e-6);
void to_csv(const CriterionReport& rep, std::ostream& out);  // t, G
nlohmann::json to_json(const CriterionReport& rep, const std::string& metric_digest);

// int_0^T m_H dt - T (16 pi - boundary_willmore); equals G(T) by coarea.
// Composite Simpson in t with panels split at jump and kink-crossing times.
double integrated_inequality(const FlowSolution& sol, const WarpFactor& f, double T,
                             double boundary_willmore, std::size_t min_samples = 2048);

struct GerochReport {
  bool nondecreasing = false;
  double worst_drop = 0.0;       // most negative m_H(t_{k+1}) - m_H(t_k)
  double first_violation_t = -1.0;
  double tolerance = 0.0;
};
GerochReport geroch_check(const FlowSolution& sol, const WarpFactor& f,
                          const std::vector<double>& t_samples);

// lhs: e^{-t/2} d/dt m_H as the flow passes r (local finite difference);
// rhs: int_{dB_r} Scal dsigma = 4 pi f^2 Scal(r). Equal when the sphere at r
// is outward minimizing (the traceless-hessian and log H gradient terms
// vanish on coordinate spheres).
std::pair<double, double> mh_derivative_identity(const WarpFactor& f, double r);

// Richardson limit of Scal over shrinking spheres R in {0.1, 0.05, 0.025};
// the scalar curvature at the pole of a pole-closed metric.
double recover_scalar_at_pole(const WarpFactor& f);

}  // namespace imcf
