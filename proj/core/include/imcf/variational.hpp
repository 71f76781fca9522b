// Discrete BV machinery behind the weak flow: the functional
//   J_u^K(v) = sum_{edges meeting K} a_e |v_{i+1} - v_i| + sum_{i in K} v_i |Du|_i,
// with a_e the sphere area at the edge midpoint and |Du|_i the exact measure
// a |u'| = d(4 pi m^2) of the envelope over the dual cell of node i. With that
// measure the calibration identity of the level-set flow survives discretely:
// J(v) >= 4 pi (m~_last v_last - m~_first v_first) for every competitor, with
// equality iff v is nondecreasing and constant across jump cells, so the
// envelope minimizes exactly and the neutral directions are exactly the
// monotone truncations. Minimality of the envelope solution, an independent
// fixed-point solver, brute-force hulls, trace checks and variational mean
// curvatures (phi-bubbles).
#pragma once

#include <cstdint>
#include <vector>

#include "imcf/flow.hpp"

namespace imcf {

struct DiscreteProfile {
  std::vector<double> r;  // strictly increasing grid
  std::vector<double> v;  // values
  std::vector<double> a;  // node areas 4 pi f(r_i)^2
  std::vector<double> ae; // edge areas 4 pi f(midpoint)^2, size N-1
  std::vector<double> du; // |Du|_i = 4 pi (m~_i^2 - m~_{i-1}^2), dual-cell masses
};

DiscreteProfile profile_from_flow(const FlowSolution& sol, const WarpFactor& f);

// K = contiguous node range [k_lo, k_hi]; v must equal u outside K.
double j_functional(const DiscreteProfile& u, const DiscreteProfile& v,
                    std::size_t k_lo, std::size_t k_hi);

struct MinimalityReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;     // min over trials of J(v) - J(u)
  double tolerance = 0.0;
  std::string worst_competitor;  // kind of the worst trial
};
// Random competitors: smooth bumps, truncations min(u,c) / max(u,c),
// piecewise-constant noise; all constrained to v = u outside a random
// compact K and clamped to v = 0 through the hull.
MinimalityReport minimality_check(const FlowSolution& sol, const WarpFactor& f,
                                  std::size_t n_trials, double tol_scale,
                                  std::uint64_t seed);
nlohmann::json to_json(const MinimalityReport& rep);

struct FixedPointResult {
  DiscreteProfile u;
  std::size_t iterations = 0;
  double quantum = 0.0;   // value-lattice step folded into comparisons
  double v_ref = 0.0;     // outer Dirichlet value (envelope of mollified f)
};
// Iterates u^{k+1} = argmin_v J_{u^k}(v) with v(r_init) = 0, v(r_max) = v_ref,
// each step solved exactly by dynamic programming on a 2^12-level value
// lattice over [0, u_max + 1]. The subproblem minimizer is non-unique (every
// monotone truncation of the solution is J-neutral, the discrete shadow of the
// continuum cut family), so ties are resolved by a proximal term
// kappa |v - u^k|_1 with kappa far below every physical cost scale; the
// selected iterate is the one nearest the current one, which is how the
// compact-support competitor class of the untruncated problem is emulated on
// a finite grid. Stops when sup|u^{k+1} - u^k| < tol.
FixedPointResult fixed_point_solve(const WarpFactor& f, double r_init,
                                   std::size_t grid_n, std::size_t max_iter = 200,
                                   double tol = 1e-8);

struct TraceReport {
  std::vector<double> radii_widths;  // rho_k = 2^{-k} rho_0
  std::vector<double> averages;      // volume-weighted mean of |u| on (r_init, r_init + rho_k)
  double limit = 0.0;                // Richardson limit of the averages
  bool pass = false;
  double tolerance = 0.0;
};
TraceReport trace_check(const std::vector<double>& grid, const std::vector<double>& u,
                        const WarpFactor& f, double r_init, double rho0,
                        double tol = 1e-3);

// Exhaustive scan over grid radii s >= r_init for the largest minimizer of
// 4 pi f(s)^2; oracle for radial_flow's hull.
double hull_bruteforce(const WarpFactor& f, const std::vector<double>& grid, double r_init);

struct PhiBubble {
  double u1 = 0.0, u2 = 0.0;     // constraint radii U1 < E < U2
  double e_radius = 0.0;         // candidate minimizer
  double phi0 = 0.0;             // phi(e_radius) = H(e_radius)
  double lambda = 0.0;           // slope of the decreasing linear profile
  bool certified = false;
  bool unique = false;
  bool kink_at_e = false;
  double gap = 0.0;              // energy gap to the best competitor
  double phi(double r) const;    // phi0 + lambda (e_radius - clamp(r)), constant outside the collar
};

// phi(r) = H(r_init) + lambda (r_init - r) on the collar with
// lambda = slope_margin + sup_collar |dH/dr|; certifies via phi_bubble_check.
PhiBubble phi_construct(const WarpFactor& f, double r_init,
                        double collar = -1.0 /* 0.2 r_init */, double slope_margin = 1.0);

struct BubbleCertificate {
  double argmin = 0.0;
  double gap = 0.0;     // min over other radii of A(s) - A(e_radius)
  bool pass = false;    // argmin == e_radius
  bool unique = false;
};
// Evaluates A(s) = 4 pi f(s)^2 - int_{U1}^{s} phi 4 pi f^2 ds over a dense
// grid of [U1, U2] containing e_radius exactly.
BubbleCertificate phi_bubble_check(const WarpFactor& f, const PhiBubble& bubble,
                                   std::size_t grid_n = 4097);

// int_{dE} phi^2 dsigma = 4 pi f(E)^2 phi(E)^2; UncertifiedBubble unless the
// certificate passed.
double phi_willmore(const WarpFactor& f, const PhiBubble& bubble);

}  // namespace imcf
