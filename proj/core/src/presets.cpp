#include "imcf/presets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "imcf/rng.hpp"

namespace imcf {

namespace {

constexpr double kCapEnd = 0.42;   // exact spherical cap up to here
constexpr double kOdeEnd = 6.0;
constexpr double kOdeStep = 1e-4;

struct OdeParams {
  std::uint64_t seed = 0;
  double a0 = 0.0;
  double amps[3] = {}, centers[3] = {}, widths[3] = {};
};

double cub(double x) {
  const double q = std::max(1.0 - x * x, 0.0);
  return q * q * q;
}

// S(r) = a0 + three compactly supported bumps, all clear of the cap region.
double scal_of(const OdeParams& p, double r) {
  double s = p.a0;
  for (int j = 0; j < 3; ++j) s += p.amps[j] * cub((r - p.centers[j]) / p.widths[j]);
  return s;
}

OdeParams draw_params(std::uint64_t seed, std::size_t attempt) {
  Rng r = Rng(seed).substream(attempt);
  OdeParams p;
  p.seed = seed;
  p.a0 = r.uniform(0.02, 0.10);
  for (int j = 0; j < 3; ++j) {
    p.amps[j] = 0.4 * r.u01();
    p.centers[j] = 0.9 + 0.8 * j + 0.5 * r.u01();
    p.widths[j] = r.uniform(0.2, std::min(0.45, p.centers[j] - 0.47));
  }
  return p;
}

// Prescribed-curvature warp factor: f'' = (2(1 - f'^2)/f^2 - S) f / 4,
// started from the exact constant-curvature cap f = k sin(r/k), k^2 = 6/a0.
// Dense RK4 tables with Hermite evaluation; the second derivative comes from
// the ODE identity, so Scal(f) = S holds exactly at every radius.
struct OdeScalImpl final : WarpFactor::Impl {
  OdeParams par;
  double k_cap = 0.0;
  std::vector<double> fs, fps;  // values and slopes at kCapEnd + i * kOdeStep

  double rhs(double r, double f, double fp) const {
    return (2.0 * (1.0 - fp * fp) / (f * f) - scal_of(par, r)) * f / 4.0;
  }

  bool integrate() {
    const std::size_t steps =
        static_cast<std::size_t>(std::llround((kOdeEnd - kCapEnd) / kOdeStep));
    fs.assign(steps + 1, 0.0);
    fps.assign(steps + 1, 0.0);
    double f = k_cap * std::sin(kCapEnd / k_cap);
    double fp = std::cos(kCapEnd / k_cap);
    fs[0] = f;
    fps[0] = fp;
    for (std::size_t i = 0; i < steps; ++i) {
      const double r = kCapEnd + static_cast<double>(i) * kOdeStep;
      const double h = kOdeStep;
      const double k1f = fp, k1p = rhs(r, f, fp);
      const double k2f = fp + 0.5 * h * k1p, k2p = rhs(r + 0.5 * h, f + 0.5 * h * k1f, fp + 0.5 * h * k1p);
      const double k3f = fp + 0.5 * h * k2p, k3p = rhs(r + 0.5 * h, f + 0.5 * h * k2f, fp + 0.5 * h * k2p);
      const double k4f = fp + h * k3p, k4p = rhs(r + h, f + h * k3f, fp + h * k3p);
      f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
      fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      if (!(f > 0.0) || fp < 0.05) return false;
      fs[i + 1] = f;
      fps[i + 1] = fp;
    }
    return fs.back() >= 3.9;  // keeps the flow proper out to t = 4 from r = 0.5
  }

  struct Cell {
    std::size_t i;
    double s, w;
  };
  Cell locate(double r) const {
    const double x = (r - kCapEnd) / kOdeStep;
    std::size_t i = static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(fs.size() - 2)));
    i = std::min(i, fs.size() - 2);
    return {i, x - static_cast<double>(i), kOdeStep};
  }
  static double hermite(double y0, double m0, double y1, double m1, double s, double w) {
    const double s2 = s * s, s3 = s2 * s;
    return y0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * w * (s3 - 2.0 * s2 + s) +
           y1 * (-2.0 * s3 + 3.0 * s2) + m1 * w * (s3 - s2);
  }

  double value(double r) const override {
    if (r <= kCapEnd) return k_cap * std::sin(r / k_cap);
    const Cell c = locate(r);
    return hermite(fs[c.i], fps[c.i], fs[c.i + 1], fps[c.i + 1], c.s, c.w);
  }
  double deriv(double r, Side) const override {
    if (r <= kCapEnd) return std::cos(r / k_cap);
    const Cell c = locate(r);
    const double ra = kCapEnd + static_cast<double>(c.i) * kOdeStep;
    const double fppa = rhs(ra, fs[c.i], fps[c.i]);
    const double fppb = rhs(ra + kOdeStep, fs[c.i + 1], fps[c.i + 1]);
    return hermite(fps[c.i], fppa, fps[c.i + 1], fppb, c.s, c.w);
  }
  double second(double r, Side) const override {
    if (r <= kCapEnd) return -std::sin(r / k_cap) / k_cap;
    return rhs(r, value(r), deriv(r, Side::unspecified));
  }
  const char* kind() const override { return "ode_scal"; }
  nlohmann::json params() const override {
    return nlohmann::json{{"seed", par.seed}, {"version", "1"}};
  }
};

std::shared_ptr<const OdeScalImpl> ode_impl(std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const OdeScalImpl>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(seed);
  if (it != cache.end()) return it->second;
  for (std::size_t attempt = 0; attempt < 32; ++attempt) {
    auto impl = std::make_shared<OdeScalImpl>();
    impl->dom = {0.0, kOdeEnd};
    impl->reg = Regularity::smooth;
    impl->par = draw_params(seed, attempt);
    impl->k_cap = std::sqrt(6.0 / impl->par.a0);
    if (impl->integrate()) {
      cache[seed] = impl;
      return impl;
    }
  }
  throw NoConvergenceError("random_nonneg_scal: no admissible draw for this seed");
}

OdeParams accepted_params(std::uint64_t seed) { return ode_impl(seed)->par; }

WarpFactor load_ode(const nlohmann::json& params) {
  return random_nonneg_scal(params.at("seed").get<std::uint64_t>());
}

}  // namespace

WarpFactor preset(const std::string& name, const nlohmann::json& params) {
  if (name == "euclidean") return WarpFactor::euclidean({0.0, 30.0});
  if (name == "schwarzschild") {
    const double m = params.value("mass", 1.0);
    return WarpFactor::schwarzschild(m, {2.2 * m, 30.0});
  }
  if (name == "hyperbolic") return WarpFactor::hyperbolic({0.0, 6.0});
  if (name == "cone_glue") {
    const double alpha = params.value("alpha", 0.8);
    return WarpFactor::cone(alpha, 1.0, {0.0, 10.0});
  }
  if (name == "neck")
    return WarpFactor::piecewise_linear({0.5, 1.0, 1.5, 8.0}, {0.5, 1.0, 0.6, 7.1});
  if (name == "random_nonneg_scal")
    return random_nonneg_scal(params.value("seed", std::uint64_t{7}));
  throw BadParamsError("unknown preset: " + name);
}

double preset_r_init(const std::string& name) {
  if (name == "euclidean") return 1.0;
  if (name == "schwarzschild") return 3.0;
  if (name == "hyperbolic") return 1.0;
  if (name == "cone_glue") return 0.9;
  if (name == "neck") return 1.0;
  if (name == "random_nonneg_scal") return 0.5;
  throw BadParamsError("unknown preset: " + name);
}

WarpFactor random_nonneg_scal(std::uint64_t seed) { return WarpFactor(ode_impl(seed)); }

double random_scal(std::uint64_t seed, double r) { return scal_of(accepted_params(seed), r); }

double random_scal_at_pole(std::uint64_t seed) { return accepted_params(seed).a0; }

void register_preset_kinds() { register_warp_factor_kind("ode_scal", load_ode); }

}  // namespace imcf
