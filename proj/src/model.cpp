#include "lbt/model.hpp"

#include <cmath>
#include <sstream>

namespace lbt {

LindbladReservoir LindbladReservoir::make(double alpha, double beta) {
  LindbladReservoir res{alpha, beta};
  require(validate(res));
  return res;
}

FermionicReservoir FermionicReservoir::make(double delta, double mu, double temperature) {
  FermionicReservoir res{delta, mu, temperature};
  require(validate(res));
  return res;
}

const char* to_string(BulkKind kind) {
  switch (kind) {
    case BulkKind::None: return "none";
    case BulkKind::Loss: return "loss";
    case BulkKind::Gain: return "gain";
  }
  return "none";
}

BulkKind bulk_kind_from_string(const std::string& name) {
  if (name == "none") return BulkKind::None;
  if (name == "loss") return BulkKind::Loss;
  if (name == "gain") return BulkKind::Gain;
  throw std::invalid_argument("unknown bulk kind '" + name + "' (expected none, loss or gain)");
}

ChainModel ChainModel::uniform(int n_sites, double hopping, double eps0) {
  ChainModel model;
  model.n_sites = n_sites;
  model.hopping = hopping;
  model.onsite.assign(n_sites > 0 ? static_cast<std::size_t>(n_sites) : 0, eps0);
  return model;
}

ChainModel ChainModel::with_bulk(BulkKind kind, double rate) const {
  ChainModel copy = *this;
  copy.bulk_kind = kind;
  copy.bulk_rate = rate;
  return copy;
}

int ChainModel::bulk_sign() const {
  switch (bulk_kind) {
    case BulkKind::Loss: return 1;
    case BulkKind::Gain: return -1;
    case BulkKind::None: return 0;
  }
  return 0;
}

bool ChainModel::has_uniform_onsite() const {
  for (double e : onsite) {
    if (e != onsite.front()) return false;
  }
  return true;
}

void ValidationReport::merge(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (const auto& v : violations) out << v.field << ": " << v.message << "\n";
  return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::invalid_argument("validation failed:\n" + report.to_string()), report_(std::move(report)) {}

ValidationError::ValidationError(const std::string& field, const std::string& message)
    : ValidationError(ValidationReport{{{field, message}}}) {}

void require(const ValidationReport& report) {
  if (!report.ok()) throw ValidationError(report);
}

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ValidationReport validate(const LindbladReservoir& res, const std::string& where) {
  ValidationReport r;
  if (!finite(res.alpha) || !finite(res.beta)) {
    r.violations.push_back({where, "rates must be finite"});
    return r;
  }
  if (res.alpha < 0) r.violations.push_back({where + ".alpha", "injection rate must be >= 0"});
  if (res.beta < 0) r.violations.push_back({where + ".beta", "extraction rate must be >= 0"});
  if (res.alpha + res.beta <= 0) r.violations.push_back({where, "zero hybridization (alpha + beta must be > 0)"});
  return r;
}

ValidationReport validate(const FermionicReservoir& res, const std::string& where) {
  ValidationReport r;
  if (!finite(res.delta) || !finite(res.mu) || !finite(res.temperature)) {
    r.violations.push_back({where, "parameters must be finite"});
    return r;
  }
  if (res.delta <= 0) r.violations.push_back({where + ".delta", "zero hybridization (delta must be > 0)"});
  if (res.temperature < 0) r.violations.push_back({where + ".temperature", "temperature must be >= 0"});
  return r;
}

ValidationReport validate(const ChainModel& model) {
  ValidationReport r;
  if (model.n_sites < 1) r.violations.push_back({"model.n_sites", "chain needs at least one site"});
  if (model.onsite.size() != static_cast<std::size_t>(std::max(model.n_sites, 0))) {
    r.violations.push_back({"model.onsite", "expected " + std::to_string(model.n_sites) + " onsite energies, got " +
                                                std::to_string(model.onsite.size())});
  }
  for (double e : model.onsite) {
    if (!finite(e)) {
      r.violations.push_back({"model.onsite", "onsite energies must be finite"});
      break;
    }
  }
  if (!finite(model.hopping)) r.violations.push_back({"model.hopping", "hopping must be finite"});
  if (!finite(model.bulk_rate) || model.bulk_rate < 0) {
    r.violations.push_back({"model.bulk_rate", "bulk rate must be finite and >= 0"});
  }
  if (model.bulk_kind == BulkKind::None && model.bulk_rate != 0) {
    r.violations.push_back({"model.bulk_rate", "inconsistent bulk dissipation (bulk_kind none requires bulk_rate 0)"});
  }
  return r;
}

ValidationReport validate(const QuadratureSpec& spec) {
  ValidationReport r;
  if (!(spec.rel_tol > 0)) r.violations.push_back({"quadrature.rel_tol", "must be > 0"});
  if (!(spec.abs_tol > 0)) r.violations.push_back({"quadrature.abs_tol", "must be > 0"});
  if (spec.max_subdivisions < 1) r.violations.push_back({"quadrature.max_subdivisions", "must be >= 1"});
  if (spec.window && !(spec.window->first < spec.window->second)) {
    r.violations.push_back({"quadrature.window", "window must be a non-empty interval"});
  }
  return r;
}

ValidationReport validate(const Drive& drive) {
  ValidationReport r;
  std::visit(
      [&](const auto& d) {
        r.merge(validate(d.left, "drive.left"));
        r.merge(validate(d.right, "drive.right"));
      },
      drive);
  return r;
}

ValidationReport validate(const ChainModel& model, const Drive& drive) {
  ValidationReport r = validate(model);
  r.merge(validate(drive));
  if (std::holds_alternative<FermionicDrive>(drive) && model.bulk_kind != BulkKind::None && model.bulk_rate > 0) {
    r.violations.push_back({"model.bulk_kind", "bulk loss/gain is only supported with Lindblad drives"});
  }
  return r;
}

}  // namespace lbt
