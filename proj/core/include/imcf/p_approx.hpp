// p-harmonic approximation of the weak flow in closed radial form:
//   w(r) = int_r^{rmax} f^{-2/(p-1)} ds / int_{rinit}^{rmax} f^{-2/(p-1)} ds,
//   u_p = -(p-1) log w,
// with cell integrals accumulated in log space (f^{-2/(p-1)} underflows long
// before p reaches 1). w(rmax) = 0 replaces decay at infinity; the induced
// truncation error is estimated and reported, never hidden.
#pragma once

#include <vector>

#include "imcf/flow.hpp"

namespace imcf {

struct PFlowProfile {
  double p = 0.0;
  std::vector<double> r;
  std::vector<double> w;    // w(rmax) = 0 exactly
  std::vector<double> u_p;  // u_p(rmax) = +infinity by the normalization
  double truncation_estimate = 0.0;  // sup shift of u_p when rmax moves
};

PFlowProfile p_harmonic_radial(const WarpFactor& f, double r_init, double p,
                               double r_max, std::size_t grid_n = 16384);

// Relative constancy of the discrete flux f(mid)^2 |dw/ds|^{p-1} across cells
// (the radial p-Laplace equation integrates to flux = const).
double p_laplace_residual(const PFlowProfile& prof, const WarpFactor& f);

struct PLimitReport {
  std::vector<double> p_list;
  std::vector<double> distances;  // sup over compact_range of |u_p - u_envelope|
  bool nonincreasing = false;
  double final_distance = 0.0;
};
PLimitReport p_limit(const WarpFactor& f, double r_init, const std::vector<double>& p_list,
                     Interval compact_range, double r_max, std::size_t grid_n = 16384);

struct HarnackReport {
  std::vector<double> p_list;
  std::vector<double> osc;  // osc_K(u_p) per p
  double sup_osc = 0.0;
  double bound = 0.0;       // default: osc_K(envelope solution) + 1e-6
  bool uniform = false;     // sup_osc <= bound
};
HarnackReport harnack_oscillation_check(const WarpFactor& f, double r_init,
                                        const std::vector<double>& p_list, Interval K,
                                        double r_max, std::size_t grid_n = 16384,
                                        double bound = -1.0);

void to_csv(const PLimitReport& rep, const HarnackReport& h, std::ostream& out);  // p, sup_distance, osc_K

}  // namespace imcf
