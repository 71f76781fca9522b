// Metric catalog: closed-form spaces, glued and neck profiles, and a seeded
// generator of smooth metrics with prescribed nonnegative scalar curvature
// (f'' = (2(1 - f'^2)/f^2 - S) f / 4 integrated from an exact spherical cap).
#pragma once

#include <cstdint>
#include <string>

#include "imcf/warp_factor.hpp"

namespace imcf {

// Names: euclidean, schwarzschild, hyperbolic, cone_glue, neck,
// random_nonneg_scal. Recognized params (all optional): mass, alpha, seed.
WarpFactor preset(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

// Initial ball radius each preset is normally flowed from.
double preset_r_init(const std::string& name);

WarpFactor random_nonneg_scal(std::uint64_t seed);

// The generator's prescribed curvature S(r) and its pole value S(0) = a0.
double random_scal(std::uint64_t seed, double r);
double random_scal_at_pole(std::uint64_t seed);

// Makes the ODE-backed kind loadable through WarpFactor::from_json. Idempotent.
void register_preset_kinds();

}  // namespace imcf
