#include "imcf/warp_factor.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace imcf {

namespace {

// relative slope jump above which a table node counts as a kink
constexpr double kKinkSlopeTol = 1e-9;

double fd_step(double r) { return std::max(1e-6, 1e-8 * std::abs(r)); }

}  // namespace

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::smooth: return "smooth";
    case Regularity::lipschitz: return "lipschitz";
    case Regularity::c0: return "c0";
  }
  return "smooth";
}

Regularity regularity_from_string(const std::string& s) {
  if (s == "smooth") return Regularity::smooth;
  if (s == "lipschitz") return Regularity::lipschitz;
  if (s == "c0") return Regularity::c0;
  throw BadParamsError("unknown regularity: " + s);
}

//----------------------------------------------------------------------------
// closed-form kinds

namespace {

struct EuclideanImpl final : WarpFactor::Impl {
  EuclideanImpl(Interval d) {
    dom = d;
    reg = Regularity::smooth;
  }
  double value(double r) const override { return r; }
  double deriv(double, Side) const override { return 1.0; }
  double second(double, Side) const override { return 0.0; }
  const char* kind() const override { return "euclidean"; }
  nlohmann::json params() const override { return nlohmann::json::object(); }
};

// Spatial Schwarzschild slice in areal radius: f(r) = r, df/ds = sqrt(1-2m/r),
// d^2f/ds^2 = m/r^2, ds/dr = 1/sqrt(1-2m/r). Vacuum: Scal == 0.
struct SchwarzschildImpl final : WarpFactor::Impl {
  double m;
  SchwarzschildImpl(double mass, Interval d) : m(mass) {
    dom = d;
    reg = Regularity::smooth;
  }
  double value(double r) const override { return r; }
  double deriv(double r, Side) const override { return std::sqrt(1.0 - 2.0 * m / r); }
  double second(double r, Side) const override { return m / (r * r); }
  double jac(double r) const override { return 1.0 / std::sqrt(1.0 - 2.0 * m / r); }
  const char* kind() const override { return "schwarzschild"; }
  nlohmann::json params() const override { return {{"mass", m}}; }
};

struct HyperbolicImpl final : WarpFactor::Impl {
  HyperbolicImpl(Interval d) {
    dom = d;
    reg = Regularity::smooth;
  }
  double value(double r) const override { return std::sinh(r); }
  double deriv(double r, Side) const override { return std::cosh(r); }
  double second(double r, Side) const override { return std::sinh(r); }
  const char* kind() const override { return "hyperbolic"; }
  nlohmann::json params() const override { return nlohmann::json::object(); }
};

// f = r up to the kink, then continues with slope alpha (continuously).
struct ConeImpl final : WarpFactor::Impl {
  double alpha, rk;
  ConeImpl(double a, double kink, Interval d) : alpha(a), rk(kink) {
    dom = d;
    reg = (a == 1.0) ? Regularity::smooth : Regularity::lipschitz;
  }
  double value(double r) const override { return r <= rk ? r : alpha * r + (1.0 - alpha) * rk; }
  double deriv(double r, Side s) const override {
    if (r < rk) return 1.0;
    if (r > rk) return alpha;
    if (alpha == 1.0) return 1.0;
    if (s == Side::left) return 1.0;
    if (s == Side::right) return alpha;
    throw KinkPointError("cone: derivative at the kink needs a side");
  }
  double second(double r, Side s) const override {
    if (r == rk && alpha != 1.0 && s == Side::unspecified)
      throw KinkPointError("cone: second derivative at the kink needs a side");
    return 0.0;
  }
  std::vector<double> kinks() const override {
    return alpha == 1.0 ? std::vector<double>{} : std::vector<double>{rk};
  }
  const char* kind() const override { return "cone"; }
  nlohmann::json params() const override { return {{"alpha", alpha}, {"kink_radius", rk}}; }
};

//----------------------------------------------------------------------------
// table kinds: piecewise-linear interpolation between samples

struct TableImpl final : WarpFactor::Impl {
  std::vector<double> rs, fs, slopes;
  std::vector<double> kink_list;
  bool is_sampled;  // affects only the serialized kind name

  TableImpl(std::vector<double> r, std::vector<double> f, Regularity regu, bool sampled_kind)
      : rs(std::move(r)), fs(std::move(f)), is_sampled(sampled_kind) {
    if (rs.size() < 2 || rs.size() != fs.size())
      throw BadParamsError("table warp factor: need >= 2 matched samples");
    for (std::size_t i = 1; i < rs.size(); ++i)
      if (!(rs[i] > rs[i - 1])) throw BadParamsError("table warp factor: radii must increase strictly");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (!std::isfinite(fs[i]) || fs[i] < 0.0) throw BadParamsError("table warp factor: f must be finite and >= 0");
      if (fs[i] == 0.0 && rs[i] != rs.front()) throw BadParamsError("table warp factor: f vanishes away from the pole");
    }
    dom = {rs.front(), rs.back()};
    reg = regu;
    slopes.resize(rs.size() - 1);
    for (std::size_t i = 0; i + 1 < rs.size(); ++i)
      slopes[i] = (fs[i + 1] - fs[i]) / (rs[i + 1] - rs[i]);
    for (std::size_t i = 1; i + 1 < rs.size(); ++i)
      if (std::abs(slopes[i] - slopes[i - 1]) > kKinkSlopeTol * (1.0 + std::abs(slopes[i]) + std::abs(slopes[i - 1])))
        kink_list.push_back(rs[i]);
  }

  std::size_t cell(double r) const {
    auto it = std::upper_bound(rs.begin(), rs.end(), r);
    std::size_t i = (it == rs.begin()) ? 0 : std::size_t(it - rs.begin()) - 1;
    return std::min(i, rs.size() - 2);
  }

  double interp(double r) const {
    // clamped linear extension beyond the table (only quadrature overshoot lands here)
    const std::size_t i = cell(std::clamp(r, dom.lo, dom.hi));
    return fs[i] + slopes[i] * (r - rs[i]);
  }

  bool near_kink(double r) const {
    for (double k : kink_list)
      if (std::abs(r - k) <= 1e-12 * (1.0 + std::abs(k))) return true;
    return false;
  }

  double value(double r) const override { return interp(r); }

  double deriv(double r, Side s) const override {
    if (near_kink(r)) {
      if (s == Side::unspecified) throw KinkPointError("table warp factor: derivative at a kink needs a side");
      const std::size_t i = cell(r);
      // r sits on node i+? — pick the cell on the requested side
      auto it = std::lower_bound(rs.begin(), rs.end(), r - 1e-12 * (1.0 + std::abs(r)));
      std::size_t node = std::size_t(it - rs.begin());
      node = std::min(std::max<std::size_t>(node, 1), rs.size() - 2);
      (void)i;
      return s == Side::left ? slopes[node - 1] : slopes[node];
    }
    // central difference, one-sided at the domain ends
    const double h = fd_step(r);
    const double lo = std::max(r - h, dom.lo), hi = std::min(r + h, dom.hi);
    return (interp(hi) - interp(lo)) / (hi - lo);
  }

  double second(double r, Side s) const override {
    if (near_kink(r) && s == Side::unspecified)
      throw KinkPointError("table warp factor: second derivative at a kink needs a side");
    return 0.0;  // piecewise-linear carries no interior curvature
  }

  std::vector<double> kinks() const override { return kink_list; }
  const char* kind() const override { return is_sampled ? "sampled" : "piecewise_linear"; }
  nlohmann::json params() const override {
    return {{"r", rs}, {"f", fs}, {"regularity", to_string(reg)}};
  }
};

//----------------------------------------------------------------------------
// mollified kind: convolution with the quartic bump psi(s) = 15/16 (1-s^2)^2
// on [-1,1], width eps, odd (point-symmetric) reflection at the domain ends.
// Derivatives land on the kernel, so C^0 bases give two continuous derivatives.

double psi(double s) { const double q = 1.0 - s * s; return 0.9375 * q * q; }
double psi_p(double s) { return -3.75 * s * (1.0 - s * s); }
double psi_pp(double s) { return -3.75 * (1.0 - 3.0 * s * s); }

// 8-point Gauss-Legendre on [-1,1]
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

struct MollifiedImpl final : WarpFactor::Impl {
  std::shared_ptr<const WarpFactor::Impl> base;
  double eps;

  MollifiedImpl(std::shared_ptr<const WarpFactor::Impl> b, double e) : base(std::move(b)), eps(e) {
    if (!(e > 0.0)) throw BadParamsError("mollify: eps must be positive");
    if (!(e < base->dom.length() / 4.0)) throw BadParamsError("mollify: eps must be < domain length / 4");
    for (double r : {base->dom.lo, base->dom.hi})
      if (std::abs(base->jac(r) - 1.0) > 1e-14)
        throw BadParamsError("mollify: only arc-length parametrized bases are supported");
    dom = base->dom;
    reg = Regularity::smooth;
  }

  // odd reflection about each endpoint value
  double extended(double x) const {
    if (x < dom.lo) return 2.0 * base->value(dom.lo) - base->value(2.0 * dom.lo - x);
    if (x > dom.hi) return 2.0 * base->value(dom.hi) - base->value(2.0 * dom.hi - x);
    return base->value(x);
  }

  // integrate g(s) * extended(r - eps s) over [-1,1] with breakpoints at kink
  // preimages (direct and reflected) so each panel is polynomial x smooth
  double convolve(double r, double (*g)(double)) const {
    std::vector<double> bp = {-1.0, 1.0};
    auto add = [&](double x) {
      const double s = (r - x) / eps;
      if (s > -1.0 && s < 1.0) bp.push_back(s);
    };
    for (double k : base->kinks()) {
      add(k);
      add(2.0 * dom.lo - k);
      add(2.0 * dom.hi - k);
    }
    add(dom.lo);
    add(dom.hi);
    std::sort(bp.begin(), bp.end());
    const bool table_base = !base->kinks().empty() || base->reg != Regularity::smooth;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const double a = bp[i], b = bp[i + 1];
      if (!(b > a)) continue;
      const std::size_t panels = table_base ? 1 : std::max<std::size_t>(1, std::size_t((b - a) / 0.25) + 1);
      const double ph = (b - a) / double(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double pa = a + ph * double(p);
        for (int q = 0; q < 8; ++q) {
          const double s = pa + 0.5 * ph * (kGx[q] + 1.0);
          acc += 0.5 * ph * kGw[q] * g(s) * extended(r - eps * s);
        }
      }
    }
    return acc;
  }

  double value(double r) const override { return convolve(r, &psi); }
  double deriv(double r, Side) const override { return convolve(r, &psi_p) / eps; }
  double second(double r, Side) const override { return convolve(r, &psi_pp) / (eps * eps); }
  const char* kind() const override { return "mollified"; }
  nlohmann::json params() const override {
    nlohmann::json b;
    b["kind"] = base->kind();
    b["domain"] = {base->dom.lo, base->dom.hi};
    b["params"] = base->params();
    return {{"epsilon", eps}, {"base", b}};
  }
};

std::map<std::string, WarpFactorLoader>& loader_registry() {
  static std::map<std::string, WarpFactorLoader> reg;
  return reg;
}

}  // namespace

//----------------------------------------------------------------------------
// WarpFactor wrapper

WarpFactor::WarpFactor(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {
  if (!impl_) throw BadParamsError("WarpFactor: null impl");
  if (!impl_->dom.valid()) throw BadParamsError("WarpFactor: invalid domain");
}

void WarpFactor::check_domain(double r) const {
  const Interval d = impl_->dom;
  if (!(r >= d.lo - 1e-12 * (1.0 + std::abs(d.lo)) && r <= d.hi + 1e-12 * (1.0 + std::abs(d.hi))))
    throw BadParamsError("WarpFactor: evaluation at r=" + format_g17(r) + " outside domain [" +
                         format_g17(d.lo) + ", " + format_g17(d.hi) + "]");
}

double WarpFactor::value(double r) const {
  check_domain(r);
  return impl_->value(r);
}
double WarpFactor::deriv(double r, Side side) const {
  check_domain(r);
  return impl_->deriv(r, side);
}
double WarpFactor::second_deriv(double r, Side side) const {
  check_domain(r);
  return impl_->second(r, side);
}
double WarpFactor::arc_jacobian(double r) const {
  check_domain(r);
  return impl_->jac(r);
}

Interval WarpFactor::domain() const { return impl_->dom; }
Regularity WarpFactor::regularity() const { return impl_->reg; }
std::string WarpFactor::kind() const { return impl_->kind(); }

bool WarpFactor::pole_closed() const {
  return impl_->dom.lo == 0.0 && impl_->value(0.0) == 0.0;
}

std::vector<double> WarpFactor::kink_radii() const { return impl_->kinks(); }

bool WarpFactor::is_kink(double r) const {
  for (double k : impl_->kinks())
    if (std::abs(r - k) <= 1e-12 * (1.0 + std::abs(k))) return true;
  return false;
}

//----------------------------------------------------------------------------
// factories

WarpFactor WarpFactor::euclidean(Interval dom) {
  if (dom.lo < 0.0) throw BadParamsError("euclidean: r_min must be >= 0");
  return WarpFactor(std::make_shared<EuclideanImpl>(dom));
}

WarpFactor WarpFactor::schwarzschild(double mass, Interval areal_dom) {
  if (!(mass > 0.0)) throw BadParamsError("schwarzschild: mass must be positive");
  if (!(areal_dom.lo > 2.0 * mass)) throw BadParamsError("schwarzschild: domain must sit outside the horizon r > 2m");
  return WarpFactor(std::make_shared<SchwarzschildImpl>(mass, areal_dom));
}

WarpFactor WarpFactor::hyperbolic(Interval dom) {
  if (dom.lo < 0.0) throw BadParamsError("hyperbolic: r_min must be >= 0");
  return WarpFactor(std::make_shared<HyperbolicImpl>(dom));
}

WarpFactor WarpFactor::cone(double alpha, double kink_radius, Interval dom) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw BadParamsError("cone: slope must lie in (0, 1]");
  if (!(kink_radius > dom.lo && kink_radius < dom.hi)) throw BadParamsError("cone: kink must be interior");
  if (dom.lo < 0.0) throw BadParamsError("cone: r_min must be >= 0");
  return WarpFactor(std::make_shared<ConeImpl>(alpha, kink_radius, dom));
}

WarpFactor WarpFactor::piecewise_linear(std::vector<double> r, std::vector<double> f, Regularity reg) {
  return WarpFactor(std::make_shared<TableImpl>(std::move(r), std::move(f), reg, false));
}

WarpFactor WarpFactor::sampled(std::vector<double> r, std::vector<double> f) {
  return WarpFactor(std::make_shared<TableImpl>(std::move(r), std::move(f), Regularity::c0, true));
}

WarpFactor WarpFactor::mollified(const WarpFactor& base, double eps) {
  return WarpFactor(std::make_shared<MollifiedImpl>(base.impl(), eps));
}

//----------------------------------------------------------------------------
// serialization

nlohmann::json WarpFactor::to_json() const {
  nlohmann::json j;
  j["kind"] = impl_->kind();
  j["domain"] = {impl_->dom.lo, impl_->dom.hi};
  j["regularity"] = to_string(impl_->reg);
  j["params"] = impl_->params();
  return j;
}

void register_warp_factor_kind(const std::string& kind, WarpFactorLoader loader) {
  loader_registry()[kind] = loader;
}

WarpFactor WarpFactor::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto d = j.at("domain");
  const Interval dom{d.at(0).get<double>(), d.at(1).get<double>()};
  const auto& p = j.at("params");
  if (kind == "euclidean") return euclidean(dom);
  if (kind == "schwarzschild") return schwarzschild(p.at("mass").get<double>(), dom);
  if (kind == "hyperbolic") return hyperbolic(dom);
  if (kind == "cone") return cone(p.at("alpha").get<double>(), p.at("kink_radius").get<double>(), dom);
  if (kind == "piecewise_linear" || kind == "sampled") {
    auto rs = p.at("r").get<std::vector<double>>();
    auto fs = p.at("f").get<std::vector<double>>();
    const Regularity reg = regularity_from_string(p.at("regularity").get<std::string>());
    return kind == "sampled" ? sampled(std::move(rs), std::move(fs))
                             : piecewise_linear(std::move(rs), std::move(fs), reg);
  }
  if (kind == "mollified") {
    const WarpFactor base = from_json(p.at("base"));
    return mollified(base, p.at("epsilon").get<double>());
  }
  auto it = loader_registry().find(kind);
  if (it != loader_registry().end()) return it->second(p);
  throw BadParamsError("from_json: unknown warp factor kind: " + kind);
}

WarpFactor WarpFactor::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw BadParamsError("from_csv: empty stream");
  // header is mandatory; accept optional whitespace
  std::string squashed;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) squashed += c;
  if (squashed != "r,f") throw BadParamsError("from_csv: expected header 'r,f'");
  std::vector<double> rs, fs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double r, f;
    if (!(row >> r >> f)) throw BadParamsError("from_csv: malformed row: " + line);
    rs.push_back(r);
    fs.push_back(f);
  }
  return sampled(std::move(rs), std::move(fs));
}

void WarpFactor::to_csv(std::ostream& out, std::size_t samples) const {
  out << "r,f\n";
  if (auto* t = dynamic_cast<const TableImpl*>(impl_.get())) {
    for (std::size_t i = 0; i < t->rs.size(); ++i)
      out << format_g17(t->rs[i]) << ',' << format_g17(t->fs[i]) << '\n';
    return;
  }
  for (double r : linspace(impl_->dom.lo, impl_->dom.hi, std::max<std::size_t>(samples, 2)))
    out << format_g17(r) << ',' << format_g17(impl_->value(r)) << '\n';
}

}  // namespace imcf
