// Experiment drivers: end-to-end criterion runs, the C0-stability experiment
// over a mollified family, and the equivalence sweep (criterion verdict vs
// sign of Scal vs pointwise recovery). Every run writes CSVs, a JSON report
// and a manifest; identical config + seed produce byte-identical files.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imcf/geometry.hpp"
#include "imcf/hawking.hpp"
#include "imcf/p_approx.hpp"
#include "imcf/presets.hpp"
#include "imcf/variational.hpp"

namespace imcf {

struct ExperimentConfig {
  std::string metric_name = "euclidean";       // preset name when metric_json empty
  nlohmann::json metric_params = nlohmann::json::object();
  std::optional<nlohmann::json> metric_json;   // explicit WarpFactor, overrides name
  double r_init = -1.0;                        // < 0: preset default
  double t_max = 2.0;
  std::size_t grid_n = 16384;
  std::size_t time_samples = 1000;
  std::vector<double> p_list = {1.5, 1.2, 1.1, 1.05, 1.01};
  std::vector<double> eps_list = {0.2, 0.1, 0.05, 0.025};
  double tol_base = 1e-6;
  double isoperimetric_floor = 1.0;
  std::string out_dir;                         // empty: no files written
  std::uint64_t seed = 1;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  WarpFactor make_metric() const;
  double effective_r_init() const;
};

struct CriterionRun {
  WarpFactor metric;
  FlowSolution sol;
  HawkingTrace trace;
  CriterionReport report;
  double boundary_willmore = 0.0;
  bool boundary_kink = false;
  std::string metric_digest;
};
CriterionRun run_criterion(const ExperimentConfig& config);

struct StabilityReport {
  std::vector<double> eps_list;
  std::vector<CriterionReport> member_reports;
  std::vector<double> distances;        // sup_distance(member, target)
  std::vector<double> willmores;        // int phi^2 per member
  double willmore_limit = 0.0;          // target's int phi^2
  std::vector<double> bulks;            // bulk integral at t_max per member
  double bulk_limit = 0.0;              // target's bulk integral at t_max
  std::vector<double> isoperimetric;    // radial estimate per member
  CriterionReport target_report;
  bool members_pass = false;
  bool willmore_converges = false;      // successive differences nonincreasing
  bool lower_semicontinuous = false;    // liminf member bulk >= target bulk - tol
  bool pass = false;
  bool inconclusive = false;
  std::string inconclusive_reason;
};
StabilityReport run_stability(const ExperimentConfig& config);

struct EquivalenceRow {
  std::string name;
  double min_scal = 0.0;
  bool verdict = false;
  double recovered = 0.0;   // Scal at the pole (or at r_init when no pole)
  double actual = 0.0;
  bool consistent = false;  // verdict == (min_scal >= -1e-9) and recovery match
};
struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  bool pass = false;
};
// Sweeps euclidean, schwarzschild, hyperbolic and random_nonneg_scal seeds
// seed_base+1 .. seed_base+n_random.
EquivalenceReport run_equivalence(const ExperimentConfig& config, std::size_t n_random = 10);

std::string metric_digest(const WarpFactor& f);
nlohmann::json manifest(const ExperimentConfig& config, const WarpFactor& f);
void write_text(const std::string& path, const std::string& contents);

}  // namespace imcf
