#include <array>
#include <cmath>

#include "doctest.h"
#include "imcf/geometry.hpp"
#include "imcf/numeric.hpp"
#include "imcf/presets.hpp"

using namespace imcf;

namespace {

// Independent curvature oracle: assemble the full 3-metric
//   g = diag(jac(r)^2, f(r)^2, f(r)^2 sin^2 theta)
// in the stored coordinate and push it through textbook tensor arithmetic
// with nested central differences. Shares nothing with the closed forms.
using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

Mat3 metric_at(const WarpFactor& f, const Vec3& x) {
  Mat3 g{};
  const double fv = f.value(x[0]);
  const double j = f.arc_jacobian(x[0]);
  const double st = std::sin(x[1]);
  g[0][0] = j * j;
  g[1][1] = fv * fv;
  g[2][2] = fv * fv * st * st;
  return g;
}

Mat3 inverse3(const Mat3& g) {
  Mat3 inv{};
  const double det =
      g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
      g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
      g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
  const double co[3][3] = {
      {g[1][1] * g[2][2] - g[1][2] * g[2][1], g[0][2] * g[2][1] - g[0][1] * g[2][2],
       g[0][1] * g[1][2] - g[0][2] * g[1][1]},
      {g[1][2] * g[2][0] - g[1][0] * g[2][2], g[0][0] * g[2][2] - g[0][2] * g[2][0],
       g[0][2] * g[1][0] - g[0][0] * g[1][2]},
      {g[1][0] * g[2][1] - g[1][1] * g[2][0], g[0][1] * g[2][0] - g[0][0] * g[2][1],
       g[0][0] * g[1][1] - g[0][1] * g[1][0]}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv[i][j] = co[i][j] / det;
  return inv;
}

// Gamma^i_{jk} by central differences of the metric components.
std::array<Mat3, 3> christoffel(const WarpFactor& f, const Vec3& x, double h) {
  const Mat3 gi = inverse3(metric_at(f, x));
  double dg[3][3][3];  // dg[k][i][j] = d_k g_{ij}
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Mat3 gp = metric_at(f, xp), gm = metric_at(f, xm);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
  }
  std::array<Mat3, 3> G{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l)
          s += gi[i][l] * (dg[j][l][k] + dg[k][l][j] - dg[l][j][k]);
        G[i][j][k] = 0.5 * s;
      }
  return G;
}

double fd_scal_at(const WarpFactor& f, double r, double h) {
  const Vec3 x{r, 1.0, 0.3};  // generic base point; nothing depends on phi
  const auto G = christoffel(f, x, h);
  double dG[3][3][3][3];  // dG[k][i][j][l] = d_k Gamma^i_{jl}
  for (int k = 0; k < 3; ++k) {
    Vec3 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const auto Gp = christoffel(f, xp, h), Gm = christoffel(f, xm, h);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
          dG[k][i][j][l] = (Gp[i][j][l] - Gm[i][j][l]) / (2.0 * h);
  }
  // Ricci_{jl} = d_i Gamma^i_{lj} - d_l Gamma^i_{ij} + Gamma^i_{im} Gamma^m_{lj}
  //              - Gamma^i_{lm} Gamma^m_{ij}
  Mat3 ric{};
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) {
        s += dG[i][i][l][j] - dG[l][i][i][j];
        for (int m = 0; m < 3; ++m)
          s += G[i][i][m] * G[m][l][j] - G[i][l][m] * G[m][i][j];
      }
      ric[j][l] = s;
    }
  const Mat3 gi = inverse3(metric_at(f, x));
  double scal = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) scal += gi[j][l] * ric[j][l];
  return scal;
}

// Richardson over h^2: the nested central differences are second order.
double oracle_scal(const WarpFactor& f, double r) {
  std::vector<double> h2, vals;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    h2.push_back(h * h);
    vals.push_back(fd_scal_at(f, r, h));
  }
  return extrapolate_to_zero(h2, vals);
}

}  // namespace

TEST_CASE("closed-form curvature matches the finite-difference Riemann oracle") {
  SUBCASE("euclidean is flat") {
    const auto f = preset("euclidean");
    CHECK(std::abs(scalar_curvature(f, 1.7)) < 1e-12);
    CHECK(std::abs(oracle_scal(f, 1.7)) < 1e-8);
  }
  SUBCASE("hyperbolic has constant curvature -6") {
    const auto f = preset("hyperbolic");
    for (double r : {0.6, 0.9, 2.0}) {
      CHECK(scalar_curvature(f, r) == doctest::Approx(-6.0).epsilon(1e-10));
      CHECK(oracle_scal(f, r) == doctest::Approx(-6.0).epsilon(1e-7));
    }
  }
  SUBCASE("schwarzschild is scalar flat in the areal coordinate") {
    const auto f = preset("schwarzschild", {{"mass", 1.0}});
    for (double r : {3.2, 5.0, 11.0}) {
      CHECK(std::abs(scalar_curvature(f, r)) < 1e-10);
      CHECK(std::abs(oracle_scal(f, r)) < 1e-7);
    }
  }
  SUBCASE("cone has 2 (1 - alpha^2) / f^2 outside the kink") {
    const auto f = preset("cone_glue", {{"alpha", 0.8}});
    for (double r : {1.5, 2.0, 4.0}) {
      const double fv = f.value(r);
      const double expect = 2.0 * (1.0 - 0.64) / (fv * fv);
      CHECK(scalar_curvature(f, r) == doctest::Approx(expect).epsilon(1e-10));
      CHECK(oracle_scal(f, r) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
  SUBCASE("prescribed-curvature metric satisfies its own equation") {
    const auto f = random_nonneg_scal(3);
    for (double r : {0.2, 1.1, 2.4, 4.0}) {
      CHECK(scalar_curvature(f, r) ==
            doctest::Approx(random_scal(3, r)).epsilon(1e-8));
      CHECK(oracle_scal(f, r) ==
            doctest::Approx(random_scal(3, r)).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("analytic derivatives agree with finite differences of the values") {
  const double h = 1e-5;
  for (const char* name : {"euclidean", "schwarzschild", "hyperbolic"}) {
    const auto f = preset(name);
    for (double r : {3.1, 4.7}) {
      const double jac = f.arc_jacobian(r);
      const double fd1 = (f.value(r + h) - f.value(r - h)) / (2.0 * h * jac);
      CHECK(f.deriv(r) == doctest::Approx(fd1).epsilon(1e-8));
      const double fd2 = (f.deriv(r + h) - f.deriv(r - h)) / (2.0 * h * jac);
      CHECK(f.second_deriv(r) == doctest::Approx(fd2).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("kinks demand a side and report one-sided slopes") {
  const auto f = preset("cone_glue", {{"alpha", 0.8}});
  CHECK(f.is_kink(1.0));
  CHECK(f.kink_radii() == std::vector<double>{1.0});
  CHECK_THROWS_AS(f.deriv(1.0), KinkPointError);
  CHECK(f.deriv(1.0, Side::left) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.deriv(1.0, Side::right) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(mean_curvature(f, 1.0, Side::left) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mean_curvature(f, 1.0, Side::right) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK_THROWS_AS(scalar_curvature(f, 1.0), KinkPointError);
}

TEST_CASE("min_scalar_curvature samples both sides of kinks") {
  CHECK(std::abs(min_scalar_curvature(preset("euclidean"), {0.5, 20.0})) < 1e-12);
  CHECK(min_scalar_curvature(preset("hyperbolic"), {0.2, 5.5}) ==
        doctest::Approx(-6.0).epsilon(1e-9));
  // piecewise-linear slopes never exceed 1 here, so samples are nonnegative
  // even though the convex corner carries negative distributional curvature
  CHECK(min_scalar_curvature(preset("neck"), {0.6, 7.5}) >= -1e-12);
}

TEST_CASE("mollification smooths, stays close and converges in C0") {
  const auto target = preset("cone_glue", {{"alpha", 0.8}});
  const auto res = mollify(target, 0.1);
  CHECK(res.metric.regularity() == Regularity::smooth);
  CHECK(res.metric.kink_radii().empty());
  const double measured = sup_distance(res.metric, target, target.domain());
  CHECK(measured == doctest::Approx(res.sup_distance).epsilon(1e-9));
  // the relative sphere-coefficient distance degenerates where f -> 0, so
  // closeness is judged on a collar bounded away from the tip
  const Interval collar{0.3, 5.0};
  CHECK(sup_distance(res.metric, target, collar) < 0.01);

  const auto seq = MetricSequence::mollified_family(target, {0.2, 0.1, 0.05, 0.025},
                                                    collar);
  REQUIRE(seq.members.size() == 4);
  for (std::size_t k = 0; k + 1 < seq.distances.size(); ++k)
    CHECK(seq.distances[k + 1] < seq.distances[k]);
  CHECK(seq.distances.back() < 0.05);
}

TEST_CASE("sup_distance is a symmetric pseudometric") {
  const auto f = preset("euclidean");
  const auto g = preset("hyperbolic");
  const Interval range{0.5, 5.0};
  CHECK(sup_distance(f, f, range) == 0.0);
  CHECK(sup_distance(f, g, range) == sup_distance(g, f, range));
  CHECK(sup_distance(f, g, range) > 0.0);
  CHECK_THROWS_AS(sup_distance(f, g, Interval{0.5, 7.0}), DomainMismatchError);
  CHECK_THROWS_AS(sup_distance(f, g, Interval{2.0, 1.0}), EmptyRangeError);
}

TEST_CASE("radial isoperimetric estimate reproduces the flat ball constant") {
  // |dB_r|^{3/2} / |B_r| = 3 sqrt(4 pi) for every euclidean ball
  const double flat = 3.0 * std::sqrt(4.0 * kPi);
  CHECK(isoperimetric_constant_radial(preset("euclidean"), {0.5, 2.0}) ==
        doctest::Approx(flat).epsilon(1e-3));
  // negative curvature only improves the ratio
  CHECK(isoperimetric_constant_radial(preset("hyperbolic"), {0.5, 2.0}) >
        flat * (1.0 - 1e-6));
}
