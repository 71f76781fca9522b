// Rotationally symmetric 3-metrics g = ds^2 + f(s)^2 g_{S^2}, represented by
// the warp factor f. Evaluation is in the metric's stored coordinate; all
// derivative queries return arc-length derivatives df/ds, d^2f/ds^2. For every
// kind except schwarzschild the stored coordinate is arc length itself; the
// schwarzschild kind is parametrized by areal radius, with ds/dr = arc_jacobian.
#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "imcf/errors.hpp"
#include "imcf/numeric.hpp"

namespace imcf {

enum class Regularity { smooth, lipschitz, c0 };

enum class Side { unspecified, left, right };

std::string to_string(Regularity r);
Regularity regularity_from_string(const std::string& s);

class WarpFactor {
 public:
  // Backing representation; subclasses live in warp_factor.cpp except the
  // ODE-backed kind which presets.cpp provides.
  struct Impl {
    Interval dom;
    Regularity reg = Regularity::smooth;
    virtual double value(double r) const = 0;
    virtual double deriv(double r, Side s) const = 0;   // df/ds
    virtual double second(double r, Side s) const = 0;  // d^2f/ds^2
    virtual double jac(double) const { return 1.0; }    // ds/dr
    virtual std::vector<double> kinks() const { return {}; }
    virtual const char* kind() const = 0;
    virtual nlohmann::json params() const = 0;
    virtual ~Impl() = default;
  };

  explicit WarpFactor(std::shared_ptr<const Impl> impl);

  double value(double r) const;
  double deriv(double r, Side side = Side::unspecified) const;
  double second_deriv(double r, Side side = Side::unspecified) const;
  double arc_jacobian(double r) const;

  Interval domain() const;
  double r_min() const { return domain().lo; }
  double r_max() const { return domain().hi; }
  Regularity regularity() const;
  std::string kind() const;

  // true when the metric closes at a pole: r_min == 0 and f(0) == 0
  bool pole_closed() const;

  std::vector<double> kink_radii() const;   // non-differentiability points
  bool is_kink(double r) const;

  nlohmann::json to_json() const;
  static WarpFactor from_json(const nlohmann::json& j);
  static WarpFactor from_csv(std::istream& in);   // two columns r,f with header
  void to_csv(std::ostream& out, std::size_t samples = 1024) const;

  // factories
  static WarpFactor euclidean(Interval dom);
  static WarpFactor schwarzschild(double mass, Interval areal_dom);
  static WarpFactor hyperbolic(Interval dom);
  static WarpFactor cone(double alpha, double kink_radius, Interval dom);
  static WarpFactor piecewise_linear(std::vector<double> r, std::vector<double> f,
                                     Regularity reg = Regularity::lipschitz);
  static WarpFactor sampled(std::vector<double> r, std::vector<double> f);
  static WarpFactor mollified(const WarpFactor& base, double eps);

  const std::shared_ptr<const Impl>& impl() const { return impl_; }

 private:
  void check_domain(double r) const;
  std::shared_ptr<const Impl> impl_;
};

// Registration hook for kinds defined outside warp_factor.cpp (ODE presets).
using WarpFactorLoader = WarpFactor (*)(const nlohmann::json& params);
void register_warp_factor_kind(const std::string& kind, WarpFactorLoader loader);

}  // namespace imcf
