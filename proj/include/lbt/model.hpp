#pragma once

// Domain types shared by every module. Units: hbar = e = k_B = 1, energies
// in units of |J| unless a model says otherwise.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lbt {

/// Markovian edge reservoir: injects at rate alpha, extracts at rate beta.
struct LindbladReservoir {
  double alpha = 0.0;
  double beta = 0.0;

  /// Level width seen by the retarded function, alpha + beta.
  double width() const { return alpha + beta; }
  /// Bias contribution alpha - beta.
  double bias() const { return alpha - beta; }

  static LindbladReservoir make(double alpha, double beta);
  bool operator==(const LindbladReservoir&) const = default;
};

/// Fermionic bath with hybridization delta, chemical potential mu and
/// temperature (T = 0 allowed).
struct FermionicReservoir {
  double delta = 1.0;
  double mu = 0.0;
  double temperature = 0.0;

  static FermionicReservoir make(double delta, double mu, double temperature);
  bool operator==(const FermionicReservoir&) const = default;
};

enum class BulkKind { None, Loss, Gain };

const char* to_string(BulkKind kind);
BulkKind bulk_kind_from_string(const std::string& name);

/// Tight-binding chain H = J sum_j (c_j^+ c_{j+1} + h.c.) + sum_j eps_j n_j,
/// optionally with uniform bulk loss or gain at rate nu on every site.
struct ChainModel {
  int n_sites = 1;
  double hopping = 1.0;
  std::vector<double> onsite{0.0};
  double bulk_rate = 0.0;
  BulkKind bulk_kind = BulkKind::None;

  static ChainModel uniform(int n_sites, double hopping = 1.0, double eps0 = 0.0);
  ChainModel with_bulk(BulkKind kind, double rate) const;

  /// +1 for loss, -1 for gain, 0 without bulk dissipation.
  int bulk_sign() const;
  /// Bulk rate entering the Green functions (zero when bulk_kind is None).
  double effective_bulk_rate() const { return bulk_kind == BulkKind::None ? 0.0 : bulk_rate; }
  /// True when every onsite energy equals the first one.
  bool has_uniform_onsite() const;

  bool operator==(const ChainModel&) const = default;
};

struct LindbladDrive {
  LindbladReservoir left;
  LindbladReservoir right;
  bool operator==(const LindbladDrive&) const = default;
};

struct FermionicDrive {
  FermionicReservoir left;
  FermionicReservoir right;
  bool operator==(const FermionicDrive&) const = default;
};

using Drive = std::variant<LindbladDrive, FermionicDrive>;

/// Numerical integration settings; `window` replaces the automatic domain.
struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  std::optional<std::pair<double, double>> window;

  bool operator==(const QuadratureSpec&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void merge(const ValidationReport& other);
  std::string to_string() const;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(ValidationReport report);
  ValidationError(const std::string& field, const std::string& message);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate(const LindbladReservoir& res, const std::string& where = "reservoir");
ValidationReport validate(const FermionicReservoir& res, const std::string& where = "reservoir");
ValidationReport validate(const ChainModel& model);
ValidationReport validate(const QuadratureSpec& spec);
ValidationReport validate(const Drive& drive);
ValidationReport validate(const ChainModel& model, const Drive& drive);

/// Throws ValidationError carrying the full report when `report` is not ok.
void require(const ValidationReport& report);

}  // namespace lbt
