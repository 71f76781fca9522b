#include "imcf/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace imcf {

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.metric_name = j.value("metric", c.metric_name);
  if (j.contains("metric_params")) c.metric_params = j.at("metric_params");
  if (j.contains("metric_json")) c.metric_json = j.at("metric_json");
  c.r_init = j.value("r_init", c.r_init);
  c.t_max = j.value("t_max", c.t_max);
  c.grid_n = j.value("grid_n", c.grid_n);
  c.time_samples = j.value("time_samples", c.time_samples);
  if (j.contains("p_list")) c.p_list = j.at("p_list").get<std::vector<double>>();
  if (j.contains("eps_list")) c.eps_list = j.at("eps_list").get<std::vector<double>>();
  c.tol_base = j.value("tol_base", c.tol_base);
  c.isoperimetric_floor = j.value("isoperimetric_floor", c.isoperimetric_floor);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.seed = j.value("seed", c.seed);
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"metric", metric_name},
                   {"metric_params", metric_params},
                   {"r_init", r_init},
                   {"t_max", t_max},
                   {"grid_n", grid_n},
                   {"time_samples", time_samples},
                   {"p_list", p_list},
                   {"eps_list", eps_list},
                   {"tol_base", tol_base},
                   {"isoperimetric_floor", isoperimetric_floor},
                   {"out_dir", out_dir},
                   {"seed", seed}};
  if (metric_json) j["metric_json"] = *metric_json;
  return j;
}

WarpFactor ExperimentConfig::make_metric() const {
  if (metric_json) {
    register_preset_kinds();
    return WarpFactor::from_json(*metric_json);
  }
  return preset(metric_name, metric_params);
}

double ExperimentConfig::effective_r_init() const {
  if (r_init >= 0.0) return r_init;
  if (metric_json)
    throw BadParamsError("r_init is required for explicit metric definitions");
  return preset_r_init(metric_name);
}

std::string metric_digest(const WarpFactor& f) {
  return hex64(fnv1a64(f.to_json().dump()));
}

nlohmann::json manifest(const ExperimentConfig& config, const WarpFactor& f) {
  return nlohmann::json{
      {"metric_digest", metric_digest(f)},
      {"metric_kind", f.kind()},
      {"config", config.to_json()},
      {"versions",
       {{"geometry", "1"},
        {"radial_flow", "1"},
        {"hawking", "1"},
        {"variational", "1"},
        {"p_approx", "1"},
        {"harness", "1"}}}};
}

void write_text(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << contents;
}

namespace {

// int_{dE} phi^2 dsigma via a certified phi-bubble when the boundary admits
// one, else the raw (outside at kinks) mean curvature of the sphere.
double boundary_willmore_at(const WarpFactor& f, double r0, bool* kinked) {
  if (kinked) *kinked = f.is_kink(r0);
  try {
    const PhiBubble b = phi_construct(f, r0);
    return phi_willmore(f, b);
  } catch (const NonMeanConvexError&) {
  } catch (const CertificationFailedError&) {
  } catch (const BadParamsError&) {
  }
  const double H = mean_curvature(f, r0, f.is_kink(r0) ? Side::right : Side::unspecified);
  const double fv = f.value(r0);
  return 4.0 * kPi * fv * fv * H * H;
}

template <typename T>
std::string csv_string(const T& obj) {
  std::ostringstream ss;
  to_csv(obj, ss);
  return ss.str();
}

}  // namespace

CriterionRun run_criterion(const ExperimentConfig& config) {
  const WarpFactor f = config.make_metric();
  const double r0 = config.effective_r_init();
  FlowSolution sol = solve_weak_imcf(f, r0, config.grid_n);
  bool kinked = false;
  const double bw = boundary_willmore_at(f, r0, &kinked);
  const std::vector<double> ts = linspace(0.0, config.t_max, config.time_samples);
  HawkingTrace trace = hawking_trace(sol, f, ts);
  CriterionReport report = criterion(sol, f, bw, ts, config.tol_base);
  CriterionRun run{f, std::move(sol), std::move(trace), std::move(report), bw, kinked,
                   metric_digest(f)};
  if (!config.out_dir.empty()) {
    const std::string d = config.out_dir + "/";
    write_text(d + "flow.csv", csv_string(run.sol));
    write_text(d + "trace.csv", csv_string(run.trace));
    write_text(d + "criterion.csv", csv_string(run.report));
    write_text(d + "report.json", to_json(run.report, run.metric_digest).dump(2) + "\n");
    write_text(d + "manifest.json", manifest(config, f).dump(2) + "\n");
  }
  return run;
}

StabilityReport run_stability(const ExperimentConfig& config) {
  const WarpFactor target = config.make_metric();
  const double r0 = config.effective_r_init();
  StabilityReport rep;
  rep.eps_list = config.eps_list;
  auto bail = [&](const std::string& why) {
    rep.inconclusive = true;
    rep.inconclusive_reason = why;
    if (!config.out_dir.empty())
      write_text(config.out_dir + "/stability.json",
                 nlohmann::json{{"inconclusive", true}, {"reason", why}}.dump(2) + "\n");
    return rep;
  };

  const FlowSolution sol_t = solve_weak_imcf(target, r0, config.grid_n);
  const double rho_max = level_radius(sol_t, config.t_max);
  const Interval swept{r0, rho_max};

  std::vector<WarpFactor> members;
  for (double eps : config.eps_list) members.push_back(WarpFactor::mollified(target, eps));

  // Each metric certifies its own phi-bubble at the common boundary sphere.
  // The bubbles agree up to the C^1 distance of the metrics near r_init, so
  // their Willmore energies converge exactly when the metrics do.
  const std::vector<double> ts = linspace(0.0, config.t_max, config.time_samples);
  auto willmore_of = [&](const WarpFactor& m) {
    const PhiBubble b = phi_construct(m, r0);
    return phi_willmore(m, b);
  };

  for (std::size_t j = 0; j < members.size(); ++j) {
    const WarpFactor& m = members[j];
    const FlowSolution sol = solve_weak_imcf(m, r0, config.grid_n);
    const Interval swept_j{r0, level_radius(sol, config.t_max)};
    const double min_scal = min_scalar_curvature(m, swept_j);
    if (min_scal < -1e-9)
      return bail("member scalar curvature dips below zero on the swept region");
    const double iso = isoperimetric_constant_radial(
        m, {m.r_min() + swept_j.hi / 1000.0, swept_j.hi});
    if (iso < config.isoperimetric_floor)
      return bail("isoperimetric floor fails on a member");
    rep.isoperimetric.push_back(iso);
    try {
      rep.willmores.push_back(willmore_of(m));
    } catch (const Error&) {
      return bail("phi bubble certification failed on a member");
    }
    rep.member_reports.push_back(criterion(sol, m, rep.willmores.back(), ts, config.tol_base));
    rep.bulks.push_back(bulk_integral(sol, m, config.t_max));
    rep.distances.push_back(sup_distance(m, target, swept));
  }

  try {
    rep.willmore_limit = willmore_of(target);
  } catch (const Error&) {
    return bail("phi bubble certification failed on the target");
  }
  rep.target_report = criterion(sol_t, target, rep.willmore_limit, ts, config.tol_base);
  rep.bulk_limit = bulk_integral(sol_t, target, config.t_max);

  rep.members_pass = true;
  for (const auto& r : rep.member_reports) rep.members_pass = rep.members_pass && r.pass;

  rep.willmore_converges =
      std::abs(rep.willmores.back() - rep.willmore_limit) <= 1e-9 * (1.0 + std::abs(rep.willmore_limit));
  for (std::size_t j = 0; j + 2 < rep.willmores.size(); ++j) {
    const double d0 = std::abs(rep.willmores[j + 1] - rep.willmores[j]);
    const double d1 = std::abs(rep.willmores[j + 2] - rep.willmores[j + 1]);
    if (d1 > d0 + 1e-12 * (1.0 + std::abs(rep.willmore_limit)))
      rep.willmore_converges = false;
  }

  rep.lower_semicontinuous =
      rep.bulks.back() >= rep.bulk_limit - 1e-3 * (1.0 + std::abs(rep.bulk_limit));

  rep.pass = rep.members_pass && rep.willmore_converges && rep.lower_semicontinuous &&
             rep.target_report.pass;

  if (!config.out_dir.empty()) {
    const std::string d = config.out_dir + "/";
    nlohmann::json j{{"eps_list", rep.eps_list},
                     {"distances", rep.distances},
                     {"willmores", rep.willmores},
                     {"willmore_limit", rep.willmore_limit},
                     {"bulks", rep.bulks},
                     {"bulk_limit", rep.bulk_limit},
                     {"isoperimetric", rep.isoperimetric},
                     {"members_pass", rep.members_pass},
                     {"willmore_converges", rep.willmore_converges},
                     {"lower_semicontinuous", rep.lower_semicontinuous},
                     {"target_min_margin", rep.target_report.min_margin},
                     {"pass", rep.pass}};
    write_text(d + "stability.json", j.dump(2) + "\n");
    for (std::size_t k = 0; k < rep.member_reports.size(); ++k)
      write_text(d + "criterion_eps" + std::to_string(k) + ".csv",
                 csv_string(rep.member_reports[k]));
    write_text(d + "criterion_target.csv", csv_string(rep.target_report));
    write_text(d + "manifest.json", manifest(config, target).dump(2) + "\n");
  }
  return rep;
}

EquivalenceReport run_equivalence(const ExperimentConfig& config, std::size_t n_random) {
  struct Case {
    std::string name;
    WarpFactor f;
    double r0;
    double actual;
  };
  std::vector<Case> cases;
  cases.push_back({"euclidean", preset("euclidean"), preset_r_init("euclidean"), 0.0});
  cases.push_back({"schwarzschild", preset("schwarzschild"), preset_r_init("schwarzschild"), 0.0});
  cases.push_back({"hyperbolic", preset("hyperbolic"), preset_r_init("hyperbolic"), -6.0});
  for (std::size_t k = 1; k <= n_random; ++k) {
    const std::uint64_t seed = config.seed + k;
    cases.push_back({"random_" + std::to_string(seed), random_nonneg_scal(seed),
                     preset_r_init("random_nonneg_scal"), random_scal_at_pole(seed)});
  }

  EquivalenceReport rep;
  rep.pass = true;
  const std::vector<double> ts = linspace(0.0, config.t_max, config.time_samples);
  for (const Case& c : cases) {
    const FlowSolution sol = solve_weak_imcf(c.f, c.r0, config.grid_n);
    const Interval swept{c.r0, level_radius(sol, config.t_max)};
    EquivalenceRow row;
    row.name = c.name;
    row.actual = c.actual;
    row.min_scal = min_scalar_curvature(c.f, swept);
    const double bw = boundary_willmore_at(c.f, c.r0, nullptr);
    row.verdict = criterion(sol, c.f, bw, ts, config.tol_base).pass;
    row.recovered =
        c.f.pole_closed() ? recover_scalar_at_pole(c.f) : scalar_curvature(c.f, c.r0);
    row.consistent = (row.verdict == (row.min_scal >= -1e-9)) &&
                     std::abs(row.recovered - row.actual) <= 1e-2 * (1.0 + std::abs(row.actual));
    rep.pass = rep.pass && row.consistent;
    rep.rows.push_back(row);
  }

  if (!config.out_dir.empty()) {
    std::ostringstream ss;
    ss << "name,min_scal,verdict,recovered,actual,consistent\n";
    for (const auto& r : rep.rows) {
      ss << r.name << ',' << format_g17(r.min_scal) << ',' << (r.verdict ? 1 : 0) << ','
         << format_g17(r.recovered) << ',' << format_g17(r.actual) << ','
         << (r.consistent ? 1 : 0) << '\n';
    }
    write_text(config.out_dir + "/equivalence.csv", ss.str());
    write_text(config.out_dir + "/manifest.json",
               manifest(config, cases.front().f).dump(2) + "\n");
  }
  return rep;
}

}  // namespace imcf
