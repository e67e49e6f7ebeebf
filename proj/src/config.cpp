#include "lbt/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

namespace lbt::config {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& known) {
  if (!obj.is_object()) throw ValidationError(where, "expected a JSON object");
  ValidationReport r;
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) r.violations.push_back({where + "." + key, "unknown key"});
  }
  require(r);
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + "." + key, "has the wrong type");
  }
}

LindbladReservoir lindblad_from(const json& j, const std::string& where, LindbladReservoir base) {
  reject_unknown(j, where, {"alpha", "beta"});
  return {get(j, "alpha", where, base.alpha), get(j, "beta", where, base.beta)};
}

FermionicReservoir fermionic_from(const json& j, const std::string& where, FermionicReservoir base) {
  reject_unknown(j, where, {"delta", "mu", "temperature"});
  return {get(j, "delta", where, base.delta), get(j, "mu", where, base.mu),
          get(j, "temperature", where, base.temperature)};
}

ChainModel model_from(const json& j, ChainModel m) {
  reject_unknown(j, "model", {"n_sites", "hopping", "onsite", "eps0", "bulk_rate", "bulk_kind"});
  const int n = get(j, "n_sites", "model", m.n_sites);
  const double eps0 = get(j, "eps0", "model", m.onsite.empty() ? 0.0 : m.onsite.front());
  if (j.contains("onsite")) {
    if (j.contains("eps0")) throw ValidationError("model", "give either onsite or eps0, not both");
    m.onsite = get(j, "onsite", "model", m.onsite);
  } else if (n != m.n_sites || j.contains("eps0")) {
    m.onsite.assign(static_cast<std::size_t>(std::max(n, 0)), eps0);
  }
  m.n_sites = n;
  m.hopping = get(j, "hopping", "model", m.hopping);
  m.bulk_rate = get(j, "bulk_rate", "model", m.bulk_rate);
  if (j.contains("bulk_kind")) {
    try {
      m.bulk_kind = bulk_kind_from_string(get<std::string>(j, "bulk_kind", "model", "none"));
    } catch (const std::invalid_argument& e) {
      throw ValidationError("model.bulk_kind", e.what());
    }
  }
  return m;
}

Drive drive_from(const json& j, const Drive& base) {
  reject_unknown(j, "drive", {"kind", "left", "right"});
  const bool base_lindblad = std::holds_alternative<LindbladDrive>(base);
  const std::string kind = get<std::string>(j, "kind", "drive", base_lindblad ? "lindblad" : "fermionic");
  if (kind == "lindblad") {
    LindbladDrive d = base_lindblad ? std::get<LindbladDrive>(base) : LindbladDrive{};
    if (j.contains("left")) d.left = lindblad_from(j["left"], "drive.left", d.left);
    if (j.contains("right")) d.right = lindblad_from(j["right"], "drive.right", d.right);
    return d;
  }
  if (kind == "fermionic") {
    FermionicDrive d = base_lindblad ? FermionicDrive{} : std::get<FermionicDrive>(base);
    if (j.contains("left")) d.left = fermionic_from(j["left"], "drive.left", d.left);
    if (j.contains("right")) d.right = fermionic_from(j["right"], "drive.right", d.right);
    return d;
  }
  throw ValidationError("drive.kind", "expected lindblad or fermionic, got '" + kind + "'");
}

QuadratureSpec quad_from(const json& j, QuadratureSpec q) {
  reject_unknown(j, "quadrature", {"rel_tol", "abs_tol", "max_subdivisions", "window"});
  q.rel_tol = get(j, "rel_tol", "quadrature", q.rel_tol);
  q.abs_tol = get(j, "abs_tol", "quadrature", q.abs_tol);
  q.max_subdivisions = get(j, "max_subdivisions", "quadrature", q.max_subdivisions);
  if (j.contains("window")) {
    if (j["window"].is_null()) {
      q.window.reset();
    } else {
      const auto w = get<std::vector<double>>(j, "window", "quadrature", {});
      if (w.size() != 2) throw ValidationError("quadrature.window", "expected [lo, hi]");
      q.window = std::pair{w[0], w[1]};
    }
  }
  return q;
}

}  // namespace

RunConfig from_json(const json& j, const RunConfig& base) {
  reject_unknown(j, "config", {"model", "drive", "quadrature", "sweep", "output"});
  RunConfig cfg = base;
  if (j.contains("model")) cfg.model = model_from(j["model"], cfg.model);
  if (j.contains("drive")) cfg.drive = drive_from(j["drive"], cfg.drive);
  if (j.contains("quadrature")) cfg.quad = quad_from(j["quadrature"], cfg.quad);
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (s.is_null()) {
      cfg.sweep.reset();
    } else {
      reject_unknown(s, "sweep", {"parameter", "values"});
      cfg.sweep = SweepSpec{get<std::string>(s, "parameter", "sweep", ""),
                            get<std::vector<double>>(s, "values", "sweep", {})};
    }
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    reject_unknown(o, "output", {"directory", "format"});
    cfg.output.directory = get(o, "directory", "output", cfg.output.directory);
    cfg.output.format = get(o, "format", "output", cfg.output.format);
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["model"] = {{"n_sites", cfg.model.n_sites},
                {"hopping", cfg.model.hopping},
                {"onsite", cfg.model.onsite},
                {"bulk_rate", cfg.model.bulk_rate},
                {"bulk_kind", to_string(cfg.model.bulk_kind)}};
  if (const auto* d = std::get_if<LindbladDrive>(&cfg.drive)) {
    j["drive"] = {{"kind", "lindblad"},
                  {"left", {{"alpha", d->left.alpha}, {"beta", d->left.beta}}},
                  {"right", {{"alpha", d->right.alpha}, {"beta", d->right.beta}}}};
  } else {
    const auto& f = std::get<FermionicDrive>(cfg.drive);
    auto res = [](const FermionicReservoir& r) {
      return json{{"delta", r.delta}, {"mu", r.mu}, {"temperature", r.temperature}};
    };
    j["drive"] = {{"kind", "fermionic"}, {"left", res(f.left)}, {"right", res(f.right)}};
  }
  j["quadrature"] = {{"rel_tol", cfg.quad.rel_tol},
                     {"abs_tol", cfg.quad.abs_tol},
                     {"max_subdivisions", cfg.quad.max_subdivisions}};
  j["quadrature"]["window"] =
      cfg.quad.window ? json::array({cfg.quad.window->first, cfg.quad.window->second}) : json(nullptr);
  j["sweep"] = cfg.sweep ? json{{"parameter", cfg.sweep->parameter}, {"values", cfg.sweep->values}} : json(nullptr);
  j["output"] = {{"directory", cfg.output.directory}, {"format", cfg.output.format}};
  return j;
}

RunConfig load(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  return from_json(j, base);
}

std::vector<std::string> sweep_parameters() {
  std::vector<std::string> names{"model.n_sites", "model.hopping", "model.eps0", "model.bulk_rate"};
  for (const char* side : {"left", "right"}) {
    for (const char* field : {"alpha", "beta", "delta", "mu", "temperature"}) {
      names.push_back(std::string("drive.") + side + "." + field);
    }
  }
  return names;
}

void set_parameter(RunConfig& cfg, const std::string& path, double value) {
  auto& m = cfg.model;
  if (path == "model.n_sites") {
    if (value != std::floor(value)) throw ValidationError(path, "must be an integer");
    const double eps0 = m.onsite.empty() ? 0.0 : m.onsite.front();
    m.n_sites = static_cast<int>(value);
    m.onsite.assign(static_cast<std::size_t>(std::max(m.n_sites, 0)), eps0);
    return;
  }
  if (path == "model.hopping") {
    m.hopping = value;
    return;
  }
  if (path == "model.eps0") {
    m.onsite.assign(m.onsite.size(), value);
    return;
  }
  if (path == "model.bulk_rate") {
    m.bulk_rate = value;
    return;
  }
  for (const std::string side : {"left", "right"}) {
    const std::string prefix = "drive." + side + ".";
    if (path.rfind(prefix, 0) != 0) continue;
    const std::string field = path.substr(prefix.size());
    if (auto* d = std::get_if<LindbladDrive>(&cfg.drive)) {
      auto& r = side == "left" ? d->left : d->right;
      if (field == "alpha") {
        r.alpha = value;
        return;
      }
      if (field == "beta") {
        r.beta = value;
        return;
      }
    } else {
      auto& f = std::get<FermionicDrive>(cfg.drive);
      auto& r = side == "left" ? f.left : f.right;
      if (field == "delta") {
        r.delta = value;
        return;
      }
      if (field == "mu") {
        r.mu = value;
        return;
      }
      if (field == "temperature") {
        r.temperature = value;
        return;
      }
    }
    throw ValidationError(path, "not a field of the configured drive kind");
  }
  throw ValidationError(path, "unknown sweep parameter");
}

ValidationReport validate(const RunConfig& cfg) {
  ValidationReport r = lbt::validate(cfg.model, cfg.drive);
  r.merge(lbt::validate(cfg.quad));
  if (cfg.sweep) {
    if (cfg.sweep->values.empty()) r.violations.push_back({"sweep.values", "need at least one value"});
    RunConfig probe = cfg;
    try {
      set_parameter(probe, cfg.sweep->parameter, 1.0);
    } catch (const ValidationError& e) {
      r.merge(e.report());
    }
  }
  if (cfg.output.format != "csv") r.violations.push_back({"output.format", "only csv is supported"});
  return r;
}

void Table::add(std::vector<double> row, bool ok) {
  rows.push_back(std::move(row));
  converged.push_back(ok);
}

bool Table::all_converged() const {
  for (bool c : converged) {
    if (!c) return false;
  }
  return true;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& metadata) {
  for (const auto& line : metadata) out << "# " << line << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << table.columns[c] << ',';
  out << "converged\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (double v : table.rows[r]) out << format_number(v) << ',';
    out << (table.converged[r] ? "true" : "false") << "\n";
  }
  if (!out) throw IoError("failed writing CSV output");
}

}  // namespace lbt::config
