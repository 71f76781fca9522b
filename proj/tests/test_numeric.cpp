#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "imcf/numeric.hpp"
#include "imcf/rng.hpp"

using namespace imcf;

TEST_CASE("linspace hits both endpoints exactly") {
  const auto x = linspace(0.1, 0.7, 7);
  CHECK(x.front() == 0.1);
  CHECK(x.back() == 0.7);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) CHECK(x[i + 1] > x[i]);
  CHECK_THROWS_AS(linspace(0.0, 1.0, 1), BadParamsError);
}

TEST_CASE("interval predicates") {
  const Interval I{1.0, 2.5};
  CHECK(I.valid());
  CHECK(I.length() == 1.5);
  CHECK(I.contains(1.0));
  CHECK(I.contains(2.5));
  CHECK(!I.contains(2.5000001));
  CHECK(!Interval{2.0, 2.0}.valid());
  CHECK(!Interval{3.0, 1.0}.valid());
}

TEST_CASE("log-space helpers agree with direct evaluation at safe arguments") {
  CHECK(log1mexp(-0.3) == doctest::Approx(std::log(1.0 - std::exp(-0.3))).epsilon(1e-14));
  // log(1 - e^{-40}) = -e^{-40} to first order; direct evaluation returns 0
  CHECK(log1mexp(-40.0) == doctest::Approx(-std::exp(-40.0)).epsilon(1e-12));
  CHECK(logsumexp(1.2, -0.7) ==
        doctest::Approx(std::log(std::exp(1.2) + std::exp(-0.7))).epsilon(1e-14));
  CHECK(logdiffexp(2.0, 1.0) ==
        doctest::Approx(std::log(std::exp(2.0) - std::exp(1.0))).epsilon(1e-14));
  // far below the underflow threshold only the log-space path survives
  CHECK(logsumexp(-1000.0, -1000.0) == doctest::Approx(-1000.0 + std::log(2.0)));
  CHECK(logdiffexp(-1000.0, -1001.0) ==
        doctest::Approx(-1000.0 + std::log(1.0 - std::exp(-1.0))));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(logsumexp(ninf, -3.0) == -3.0);
  CHECK(logdiffexp(-3.0, ninf) == -3.0);
}

TEST_CASE("simpson is exact on cubics and fourth order on smooth integrands") {
  const auto cubic = [](double x) { return x * x * x - 2.0 * x + 1.0; };
  CHECK(simpson(cubic, 0.0, 2.0, 8) == doctest::Approx(2.0).epsilon(1e-14));
  const auto s = [](double x) { return std::sin(x); };
  const double exact = 1.0 - std::cos(3.0);
  const double e16 = std::abs(simpson(s, 0.0, 3.0, 16) - exact);
  const double e32 = std::abs(simpson(s, 0.0, 3.0, 32) - exact);
  CHECK(e32 < e16 / 12.0);  // ~16x per refinement
}

TEST_CASE("extrapolate_to_zero reproduces polynomial limits") {
  std::vector<double> xs = {0.4, 0.2, 0.1}, ys;
  for (double x : xs) ys.push_back(3.0 + 2.0 * x + 5.0 * x * x);
  CHECK(extrapolate_to_zero(xs, ys) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(extrapolate_to_zero({1.0}, {}), BadParamsError);
}

TEST_CASE("format_g17 round-trips doubles bit for bit") {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const double x = std::ldexp(2.0 * rng.u01() - 1.0, int(rng.index(80)) - 40);
    CHECK(std::strtod(format_g17(x).c_str(), nullptr) == x);
  }
  CHECK(std::strtod(format_g17(0.1).c_str(), nullptr) == 0.1);
}

TEST_CASE("fnv1a64 matches the reference vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(0) == "0000000000000000");
}

TEST_CASE("rng streams are deterministic, bounded and substream-decorrelated") {
  Rng a(42), b(42);
  for (int i = 0; i < 256; ++i) CHECK(a.u01() == b.u01());
  Rng c(7);
  for (int i = 0; i < 2048; ++i) {
    const double v = c.u01();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  Rng d(9);
  for (int i = 0; i < 256; ++i) CHECK(d.index(13) < 13);
  Rng e(3);
  for (int i = 0; i < 256; ++i) {
    const double v = e.uniform(2.0, 5.0);
    CHECK(v >= 2.0);
    CHECK(v <= 5.0);
  }
  Rng base(42);
  CHECK(base.substream(1).u01() != base.substream(2).u01());
  CHECK(base.substream(1).u01() == Rng(42).substream(1).u01());
}
