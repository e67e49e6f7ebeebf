#pragma once

// Run configuration (JSON) and CSV emission for the command-line tool.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lbt/model.hpp"

namespace lbt::config {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  bool operator==(const SweepSpec&) const = default;
};

struct OutputSpec {
  std::string directory = ".";
  std::string format = "csv";
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  ChainModel model;
  Drive drive = LindbladDrive{{1.0, 0.0}, {0.0, 1.0}};
  QuadratureSpec quad;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
  bool operator==(const RunConfig&) const = default;
};

/// Parses a configuration; missing keys keep the defaults of `base`.
RunConfig from_json(const nlohmann::json& j, const RunConfig& base = {});
nlohmann::json to_json(const RunConfig& cfg);
RunConfig load(const std::string& path, const RunConfig& base = {});

/// Names accepted as sweep parameters, e.g. "model.hopping", "drive.left.alpha".
std::vector<std::string> sweep_parameters();
/// Writes `value` into the field named by `path`; throws on unknown names.
void set_parameter(RunConfig& cfg, const std::string& path, double value);

ValidationReport validate(const RunConfig& cfg);

/// A named table; rows that failed to converge keep their best estimate and
/// are flagged in the trailing `converged` column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<bool> converged;

  void add(std::vector<double> row, bool ok = true);
  bool all_converged() const;
};

/// CSV with `#` metadata lines (tool version, resolved config), a header row
/// and 17 significant digits per value.
void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& metadata);
std::string format_number(double x);

}  // namespace lbt::config
