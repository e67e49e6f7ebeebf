#pragma once

// Sweep, figure and oracle-check drivers shared by the CLI and bindings.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lbt/config.hpp"

namespace lbt::runner {

/// Evaluates `task(i)` for i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). Results land at their input index, so the
/// output order never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, unsigned threads = 0);

/// Currents of one configuration: j_left, j_right, j_through, j_dissipative
/// for Lindblad drives (generic Keldysh formula), j_through alone for
/// fermionic drives (Landauer).
struct PointResult {
  std::vector<std::string> columns;
  std::vector<double> values;
  bool converged = true;
};
PointResult evaluate_current(const config::RunConfig& cfg);

/// Runs cfg.sweep; one row per value, in input order.
config::Table run_sweep(const config::RunConfig& cfg, unsigned threads = 0);

struct ResonanceOptions {
  std::vector<int> sizes{2, 4, 8, 16, 32};
  double delta = 0.1;
  double e_min = -2.5;
  double e_max = 2.5;
  int points = 1001;
};
config::Table figure_resonances(const ResonanceOptions& opt, unsigned threads = 0);

struct ConductanceOptions {
  std::vector<int> sizes{1, 2, 3, 4, 5, 6, 7, 8};
  double delta = 0.1;
  double mu = 0.0;
  std::vector<double> temperatures{0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10, 100};
  QuadratureSpec quad;
};
config::Table figure_conductance(const ConductanceOptions& opt, unsigned threads = 0);

struct DissipationOptions {
  std::vector<int> sizes{2, 4, 6, 8};
  double delta = 1.0;
  double dmu = 0.4;
  std::vector<double> rates;  // empty: 0, 0.2, ..., 4 followed by 10, 100, 1000
  BulkKind kind = BulkKind::Loss;
  QuadratureSpec quad;

  std::vector<double> resolved_rates() const;
};
/// Columns n_sites, nu, j_through, j_dissipative, generic_path.
config::Table figure_current_loss(const DissipationOptions& opt, unsigned threads = 0);
/// Columns n_sites, nu, j_dissipative.
config::Table figure_jd(const DissipationOptions& opt, unsigned threads = 0);

struct OracleCheckOptions {
  int max_n = 4;
  std::uint64_t seed = 7;
  int drives = 3;
  std::vector<double> rates{0.0, 0.3, 1.0};
  double tolerance = 1e-8;
  QuadratureSpec quad{1e-11, 1e-13, 4000, std::nullopt};
};
struct OracleCheckRow {
  int n_sites;
  double nu;
  BulkKind kind;
  int sample;
  LindbladDrive drive;
  std::vector<double> onsite;
  double j_formula, j_oracle, jd_formula, jd_oracle;
  double conservation_defect;
  bool pass;
};
std::vector<OracleCheckRow> oracle_check(const OracleCheckOptions& opt, unsigned threads = 0);
config::Table oracle_table(const std::vector<OracleCheckRow>& rows);

/// Metadata lines every CSV starts with: tool version and the resolved
/// configuration as a single JSON line.
std::vector<std::string> metadata(const std::string& command, const nlohmann::json& resolved);

}  // namespace lbt::runner
