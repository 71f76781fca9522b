#include <cmath>

#include "doctest.h"
#include "imcf/numeric.hpp"
#include "imcf/presets.hpp"
#include "imcf/variational.hpp"

using namespace imcf;

namespace {

FlowSolution flow_preset(const char* name, std::size_t grid_n = 4096) {
  const auto f = preset(name);
  return solve_weak_imcf(f, preset_r_init(name), grid_n);
}

}  // namespace

TEST_CASE("the |Du| measure telescopes to the total area difference") {
  for (const char* name : {"euclidean", "neck", "schwarzschild"}) {
    const auto sol = flow_preset(name);
    const auto prof = profile_from_flow(sol, sol.metric);
    REQUIRE(prof.du.size() == prof.r.size());
    double total = 0.0;
    for (double d : prof.du) {
      CHECK(d >= 0.0);
      total += d;
    }
    const double expect =
        4.0 * kPi * (sol.m.back() * sol.m.back() - sol.m[0] * sol.m[0]);
    if (sol.jumps.empty()) {
      // monotone midpoint envelope: the sum telescopes exactly
      CHECK(total == doctest::Approx(expect).epsilon(1e-12));
    } else {
      // midpoints can dip below the node envelope at a kink minimum; the
      // clamp to du >= 0 adds O(h) mass there but never loses any
      CHECK(total >= expect - 1e-10 * (1.0 + expect));
      CHECK(total - expect < 0.05);
    }
    // no mass lands inside jump runs (the envelope is constant there)
    for (const auto& J : sol.jumps)
      for (std::size_t i = J.ia + 1; i < J.ib; ++i) CHECK(prof.du[i] == 0.0);
  }
}

TEST_CASE("j_functional rejects mismatched grids and out-of-K edits") {
  const auto sol = flow_preset("euclidean", 512);
  const auto u = profile_from_flow(sol, sol.metric);
  auto v = u;
  v.r.pop_back();
  v.v.pop_back();
  CHECK_THROWS_AS(j_functional(u, v, 10, 20), GridMismatchError);
  v = u;
  v.v[40] += 0.5;
  CHECK_THROWS_AS(j_functional(u, v, 10, 20), CompetitorModifiesOutsideKError);
  CHECK_NOTHROW(j_functional(u, v, 30, 50));
}

TEST_CASE("calibration: truncations are neutral, everything else costs energy") {
  const auto sol = flow_preset("euclidean", 2048);
  const auto u = profile_from_flow(sol, sol.metric);
  const std::size_t n = u.r.size();
  const std::size_t k_lo = 1, k_hi = n - 2;
  const double base = j_functional(u, u, k_lo, k_hi);
  const double slack = 1e-10 * (1.0 + base);

  SUBCASE("ceilings min(u, c) cost exactly nothing") {
    for (double c : {0.5, 1.3, 2.9}) {
      auto v = u;
      for (std::size_t i = k_lo; i <= k_hi; ++i) v.v[i] = std::min(u.v[i], c);
      CHECK(std::abs(j_functional(u, v, k_lo, k_hi) - base) <= slack);
    }
  }
  SUBCASE("interior ceilings and floors are neutral") {
    // pick K strictly inside the monotone range so truncation stays admissible
    const std::size_t a = n / 4, b = n / 2;
    const double lo = u.v[a], hi = u.v[b];
    auto v = u;
    for (std::size_t i = a; i <= b; ++i)
      v.v[i] = std::min(std::max(u.v[i], lo), hi);  // identity: sanity
    CHECK(j_functional(u, v, a, b) == doctest::Approx(j_functional(u, u, a, b)));
    for (std::size_t i = a; i <= b; ++i) v.v[i] = std::max(u.v[i], u.v[a + 8]);
    // floor through the first few nodes of K only: still equals u at the ends
    CHECK(std::abs(j_functional(u, v, a, b) - j_functional(u, u, a, b)) <=
          1e-10 * (1.0 + base));
  }
  SUBCASE("spikes and dents strictly lose") {
    auto v = u;
    v.v[n / 2] += 0.3;
    CHECK(j_functional(u, v, k_lo, k_hi) > base + 0.1);
    v = u;
    v.v[n / 2] = std::max(0.0, v.v[n / 2] - 0.3);
    CHECK(j_functional(u, v, k_lo, k_hi) > base + 0.1);
  }
}

TEST_CASE("random competitor sweep never undercuts the envelope") {
  for (const char* name : {"euclidean", "neck"}) {
    const auto sol = flow_preset(name);
    const auto rep = minimality_check(sol, sol.metric, 200, 1e-8, 7);
    CHECK(rep.trials == 200);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin >= -rep.tolerance);
    const auto j = to_json(rep);
    CHECK(j.at("violations").get<std::size_t>() == 0);
    CHECK(j.at("seed").get<std::uint64_t>() == 7);
  }
}

TEST_CASE("a corrupted profile is no longer minimal and the functional sees it") {
  const auto sol = flow_preset("euclidean", 1024);
  auto bad = sol;
  const std::size_t n = bad.u.size();
  for (std::size_t i = n / 2; i < n / 2 + 16; ++i) bad.u[i] += 0.4;  // off-envelope bulge
  const auto prof_bad = profile_from_flow(bad, bad.metric);
  auto repaired = prof_bad;
  for (std::size_t i = 0; i < n; ++i) repaired.v[i] = sol.u[i];
  const double j_bad = j_functional(prof_bad, prof_bad, 1, n - 2);
  const double j_rep = j_functional(prof_bad, repaired, 1, n - 2);
  CHECK(j_rep < j_bad - 0.1);  // the original envelope undercuts the corruption
}

TEST_CASE("independent fixed point lands on the envelope solution") {
  for (const char* name : {"euclidean", "neck"}) {
    const auto f = preset(name);
    const double r0 = preset_r_init(name);
    const auto sol = solve_weak_imcf(f, r0, 512);
    const auto res = fixed_point_solve(f, r0, 512);
    CHECK(res.iterations <= 200);
    CHECK(res.quantum > 0.0);
    REQUIRE(res.u.v.size() == sol.u.size());
    double max_du = 0.0;
    for (std::size_t i = 0; i + 1 < sol.u.size(); ++i)
      max_du = std::max(max_du, sol.u[i + 1] - sol.u[i]);
    const double bound = 3.0 * max_du + 2.0 * res.quantum;
    double sup = 0.0;
    for (std::size_t i = 0; i < sol.u.size(); ++i)
      sup = std::max(sup, std::abs(res.u.v[i] - sol.u[i]));
    CHECK(sup <= bound);
  }
}

TEST_CASE("boundary trace of the solution vanishes at the initial sphere") {
  const auto sol = flow_preset("euclidean");
  // rho0 large enough that the eighth halving still contains grid nodes
  const auto rep = trace_check(sol.grid, sol.u, sol.metric, 1.0, 4.0);
  CHECK(rep.pass);
  CHECK(std::abs(rep.limit) <= rep.tolerance);
  REQUIRE(rep.averages.size() == rep.radii_widths.size());
  // averages of |u| over shrinking collars decrease toward zero
  CHECK(rep.averages.back() < rep.averages.front());

  auto shifted = sol.u;
  for (auto& x : shifted) x += 0.5;
  const auto bad = trace_check(sol.grid, shifted, sol.metric, 1.0, 4.0);
  CHECK(!bad.pass);
  CHECK(bad.limit > 0.4);
  CHECK_THROWS_AS(trace_check(sol.grid, sol.u, sol.metric, 1.0, 100.0), BadParamsError);
}

TEST_CASE("exhaustive hull scan agrees with the flow hull on every preset") {
  for (const char* name :
       {"euclidean", "schwarzschild", "hyperbolic", "cone_glue", "neck", "random_nonneg_scal"}) {
    const auto sol = flow_preset(name);
    CHECK(hull_bruteforce(sol.metric, sol.grid, sol.grid.front()) == sol.r_hull);
  }
}

TEST_CASE("variational mean curvature of the flat unit sphere") {
  const auto f = preset("euclidean");
  const auto b = phi_construct(f, 1.0);
  CHECK(b.certified);
  CHECK(b.unique);
  CHECK(!b.kink_at_e);
  CHECK(b.e_radius == 1.0);
  CHECK(b.phi0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.phi(1.0) == doctest::Approx(b.phi0));
  // constant outside the collar
  CHECK(b.phi(b.u1 - 0.05) == b.phi(b.u1));
  CHECK(b.phi(b.u2 + 0.05) == b.phi(b.u2));
  CHECK(phi_willmore(f, b) == doctest::Approx(16.0 * kPi).epsilon(1e-10));

  const auto cert = phi_bubble_check(f, b);
  CHECK(cert.pass);
  CHECK(cert.argmin == b.e_radius);
  CHECK(cert.unique);
  CHECK(cert.gap > 0.0);
}

TEST_CASE("variational mean curvature across corners") {
  // concave corner (slope jumps up): the ball certifies with a kink at E
  const auto neck = preset("neck");
  const auto b = phi_construct(neck, 1.5);
  CHECK(b.certified);
  CHECK(b.kink_at_e);
  CHECK(b.phi0 == doctest::Approx(2.0 / neck.value(1.5)).epsilon(1e-12));
  CHECK(phi_willmore(neck, b) == doctest::Approx(16.0 * kPi).epsilon(1e-10));

  // convex corner (slope drops): the sphere is not the bubble minimizer
  const auto cone = preset("cone_glue", {{"alpha", 0.8}});
  CHECK_THROWS_AS(phi_construct(cone, 1.0), CertificationFailedError);

  // inside the decreasing branch nothing is mean convex
  CHECK_THROWS_AS(phi_construct(neck, 1.2), NonMeanConvexError);

  PhiBubble loose;
  loose.certified = false;
  CHECK_THROWS_AS(phi_willmore(neck, loose), UncertifiedBubbleError);
}
