#include <cmath>
#include <sstream>

#include "doctest.h"
#include "imcf/flow.hpp"
#include "imcf/numeric.hpp"
#include "imcf/p_approx.hpp"
#include "imcf/presets.hpp"

using namespace imcf;

namespace {

// flat-space closed form: w = (r^{1-b} - R^{1-b}) / (r0^{1-b} - R^{1-b}),
// b = 2/(p-1), truncated at R = r_max
double flat_up(double r, double r0, double R, double p) {
  const double b = 2.0 / (p - 1.0);
  const double w = (std::pow(r, 1.0 - b) - std::pow(R, 1.0 - b)) /
                   (std::pow(r0, 1.0 - b) - std::pow(R, 1.0 - b));
  return -(p - 1.0) * std::log(w);
}

}  // namespace

TEST_CASE("radial p-harmonic profile matches the flat closed form") {
  const auto f = preset("euclidean");
  for (double p : {1.5, 2.0, 1.1}) {
    const auto prof = p_harmonic_radial(f, 1.0, p, 20.0, 8192);
    CHECK(prof.p == p);
    CHECK(prof.w.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prof.w.back() == 0.0);
    CHECK(prof.u_p.front() == 0.0);
    CHECK(std::isinf(prof.u_p.back()));
    for (std::size_t i = 256; i + 256 < prof.r.size(); i += 1024) {
      const double exact = flat_up(prof.r[i], 1.0, 20.0, p);
      CHECK(prof.u_p[i] == doctest::Approx(exact).epsilon(1e-6).scale(1.0 + exact));
    }
  }
  CHECK_THROWS_AS(p_harmonic_radial(f, 1.0, 1.0, 20.0), BadParamsError);
  CHECK_THROWS_AS(p_harmonic_radial(f, 1.0, 3.0, 20.0), BadParamsError);
  CHECK_THROWS_AS(p_harmonic_radial(f, 0.0, 1.5, 20.0), BadParamsError);
}

TEST_CASE("discrete p-laplace flux is constant to second order") {
  for (const char* name : {"euclidean", "hyperbolic"}) {
    const auto f = preset(name);
    const double r0 = preset_r_init(name);
    const double rmax = name[0] == 'e' ? 20.0 : 5.5;
    for (double p : {1.5, 2.0, 2.5}) {
      const std::size_t n = 4096;
      const auto prof = p_harmonic_radial(f, r0, p, rmax, n);
      const double h = (rmax - r0) / double(n - 1);
      CHECK(p_laplace_residual(prof, f) <= 10.0 * h * h);
    }
  }
}

TEST_CASE("truncation estimate shrinks as the outer radius grows") {
  const auto f = preset("euclidean");
  const auto near = p_harmonic_radial(f, 1.0, 1.5, 10.0, 4096);
  const auto far = p_harmonic_radial(f, 1.0, 1.5, 25.0, 4096);
  CHECK(near.truncation_estimate > 0.0);
  CHECK(far.truncation_estimate < near.truncation_estimate);
}

TEST_CASE("u_p converges to the weak flow as p drops to 1") {
  const auto f = preset("euclidean");
  const std::vector<double> ps = {1.5, 1.2, 1.1, 1.05, 1.01};
  const double e1 = std::exp(1.0), e2 = std::exp(2.0);
  const auto rep = p_limit(f, 1.0, ps, {e1, e2}, 25.0, 8192);
  REQUIRE(rep.distances.size() == ps.size());
  CHECK(rep.nonincreasing);
  for (std::size_t k = 0; k + 1 < rep.distances.size(); ++k)
    CHECK(rep.distances[k + 1] <= rep.distances[k] + 1e-12);
  CHECK(rep.final_distance == rep.distances.back());
  CHECK(rep.final_distance <= 5e-2);
  CHECK_THROWS_AS(p_limit(f, 1.0, {}, {e1, e2}, 25.0, 512), BadParamsError);
  CHECK_THROWS_AS(p_limit(f, 1.0, ps, {0.5, e2}, 25.0, 512), BadParamsError);
}

TEST_CASE("uniform oscillation bound on a compact set away from the boundary") {
  const auto f = preset("euclidean");
  const std::vector<double> ps = {1.5, 1.2, 1.1, 1.05, 1.01};
  const auto h = harnack_oscillation_check(f, 1.0, ps, {2.0, 3.0}, 25.0, 8192);
  REQUIRE(h.osc.size() == ps.size());
  // default bound is the envelope oscillation 2 log(3/2) plus a hair
  CHECK(h.bound == doctest::Approx(2.0 * std::log(1.5) + 1e-6).epsilon(5e-3));
  CHECK(h.uniform);
  CHECK(h.sup_osc <= h.bound);
  // each oscillation is (3 - p) log(3/2) up to discretization
  for (std::size_t k = 0; k < ps.size(); ++k)
    CHECK(h.osc[k] ==
          doctest::Approx((3.0 - ps[k]) * std::log(1.5)).epsilon(5e-3));
}

TEST_CASE("p-sweep under a jump: oscillation on the far side stays bounded") {
  // the neck dip forces the flow to jump; u_p must still be uniformly
  // controlled on a compact set beyond the dip
  const auto f = preset("neck");
  const std::vector<double> ps = {1.5, 1.2, 1.1};
  const auto h = harnack_oscillation_check(f, 1.0, ps, {2.0, 3.0}, 8.0, 8192);
  CHECK(h.uniform);
  const auto sol = solve_weak_imcf(f, 1.0, 8192);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    if (sol.grid[i] < 2.0 || sol.grid[i] > 3.0) continue;
    lo = std::min(lo, sol.u[i]);
    hi = std::max(hi, sol.u[i]);
  }
  CHECK(h.bound == doctest::Approx(hi - lo + 1e-6).epsilon(1e-12));
}

TEST_CASE("p-sweep csv export is deterministic") {
  const auto f = preset("euclidean");
  const std::vector<double> ps = {1.5, 1.2};
  const auto rep = p_limit(f, 1.0, ps, {2.0, 4.0}, 20.0, 1024);
  const auto h = harnack_oscillation_check(f, 1.0, ps, {2.0, 3.0}, 20.0, 1024);
  std::ostringstream a, b;
  to_csv(rep, h, a);
  to_csv(rep, h, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, a.str().find('\n')) == "p,sup_distance,osc_K");
  const auto bad = harnack_oscillation_check(f, 1.0, {1.5}, {2.0, 3.0}, 20.0, 1024);
  std::ostringstream c;
  CHECK_THROWS_AS(to_csv(rep, bad, c), BadParamsError);
}
