// lbt: steady-state currents of driven tight-binding chains.
//
// Exit codes: 0 success, 1 invalid input, 2 quadrature did not converge,
// 3 file I/O failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lbt/config.hpp"
#include "lbt/runner.hpp"
#include "lbt/transport.hpp"

namespace {

using lbt::config::RunConfig;

enum Exit { kOk = 0, kInvalid = 1, kNoConvergence = 2, kIo = 3 };

struct Flags {
  std::string config_path;
  std::string preset;
  std::string n;
  std::optional<double> hopping, eps0, nu;
  std::string bulk;
  std::optional<double> alpha_l, beta_l, alpha_r, beta_r;
  std::optional<double> delta_l, delta_r, mu_l, mu_r, temperature;
  std::optional<double> rel_tol, abs_tol;
  std::optional<int> max_subdivisions;
  std::string out = ".";
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration");
  cmd->add_option("--preset", f.preset, "single-site, chain, dissipative-chain or fermionic-dot");
  cmd->add_option("--hopping", f.hopping, "hopping J");
  cmd->add_option("--eps0", f.eps0, "uniform onsite energy");
  cmd->add_option("--nu", f.nu, "bulk loss/gain rate");
  cmd->add_option("--bulk", f.bulk, "none, loss or gain");
  cmd->add_option("--alpha-l", f.alpha_l, "left injection rate");
  cmd->add_option("--beta-l", f.beta_l, "left extraction rate");
  cmd->add_option("--alpha-r", f.alpha_r, "right injection rate");
  cmd->add_option("--beta-r", f.beta_r, "right extraction rate");
  cmd->add_option("--delta-l", f.delta_l, "left hybridization");
  cmd->add_option("--delta-r", f.delta_r, "right hybridization");
  cmd->add_option("--mu-l", f.mu_l, "left chemical potential");
  cmd->add_option("--mu-r", f.mu_r, "right chemical potential");
  cmd->add_option("--temperature", f.temperature, "temperature of both baths");
  cmd->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
  cmd->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
  cmd->add_option("--max-subdivisions", f.max_subdivisions, "quadrature subdivision budget");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream cell(item);
    T value{};
    if (!(cell >> value) || !(cell >> std::ws).eof()) throw lbt::ValidationError(what, "cannot parse '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw lbt::ValidationError(what, "empty list");
  return out;
}

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  if (name.empty() || name == "single-site") return cfg;
  if (name == "chain") {
    cfg.model = lbt::ChainModel::uniform(4);
    cfg.drive = lbt::LindbladDrive{{0.75, 0.25}, {0.25, 0.75}};
    return cfg;
  }
  if (name == "dissipative-chain") {
    cfg.model = lbt::ChainModel::uniform(6).with_bulk(lbt::BulkKind::Loss, 1.0);
    cfg.drive = lbt::LindbladDrive{{0.7, 0.3}, {0.3, 0.7}};
    return cfg;
  }
  if (name == "fermionic-dot") {
    cfg.drive = lbt::FermionicDrive{{1.0, 0.5, 0.1}, {1.0, -0.5, 0.1}};
    return cfg;
  }
  throw lbt::ValidationError("preset", "unknown preset '" + name + "'");
}

// Preset, then config file, then individual flags.
RunConfig resolve(const Flags& f) {
  RunConfig cfg = preset(f.preset);
  if (!f.config_path.empty()) cfg = lbt::config::load(f.config_path, cfg);

  auto& m = cfg.model;
  if (!f.n.empty()) lbt::config::set_parameter(cfg, "model.n_sites", parse_list<int>(f.n, "n").at(0));
  if (f.hopping) m.hopping = *f.hopping;
  if (f.eps0) m.onsite.assign(m.onsite.size(), *f.eps0);
  if (!f.bulk.empty()) {
    try {
      m.bulk_kind = lbt::bulk_kind_from_string(f.bulk);
    } catch (const std::invalid_argument& e) {
      throw lbt::ValidationError("bulk", e.what());
    }
  }
  if (f.nu) {
    m.bulk_rate = *f.nu;
    if (m.bulk_kind == lbt::BulkKind::None && *f.nu > 0) m.bulk_kind = lbt::BulkKind::Loss;
  }

  const bool lindblad_flags = f.alpha_l || f.beta_l || f.alpha_r || f.beta_r;
  const bool fermionic_flags = f.delta_l || f.delta_r || f.mu_l || f.mu_r || f.temperature;
  if (lindblad_flags && fermionic_flags) {
    throw lbt::ValidationError("drive", "Lindblad rates and fermionic bath parameters cannot be mixed");
  }
  if (lindblad_flags) {
    if (!std::holds_alternative<lbt::LindbladDrive>(cfg.drive)) cfg.drive = lbt::LindbladDrive{};
    auto& d = std::get<lbt::LindbladDrive>(cfg.drive);
    if (f.alpha_l) d.left.alpha = *f.alpha_l;
    if (f.beta_l) d.left.beta = *f.beta_l;
    if (f.alpha_r) d.right.alpha = *f.alpha_r;
    if (f.beta_r) d.right.beta = *f.beta_r;
  }
  if (fermionic_flags) {
    if (!std::holds_alternative<lbt::FermionicDrive>(cfg.drive)) cfg.drive = lbt::FermionicDrive{};
    auto& d = std::get<lbt::FermionicDrive>(cfg.drive);
    if (f.delta_l) d.left.delta = *f.delta_l;
    if (f.delta_r) d.right.delta = *f.delta_r;
    if (f.mu_l) d.left.mu = *f.mu_l;
    if (f.mu_r) d.right.mu = *f.mu_r;
    if (f.temperature) d.left.temperature = d.right.temperature = *f.temperature;
  }
  if (f.rel_tol) cfg.quad.rel_tol = *f.rel_tol;
  if (f.abs_tol) cfg.quad.abs_tol = *f.abs_tol;
  if (f.max_subdivisions) cfg.quad.max_subdivisions = *f.max_subdivisions;
  if (f.out != ".") cfg.output.directory = f.out;
  lbt::require(lbt::config::validate(cfg));
  return cfg;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::filesystem::path write_table(const std::string& directory, const std::string& name,
                                  const lbt::config::Table& table, const std::vector<std::string>& meta) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw lbt::config::IoError("cannot create output directory '" + directory + "': " + ec.message());
  const auto path = std::filesystem::path(directory) / (name + ".csv");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lbt::config::IoError("cannot open '" + path.string() + "' for writing");
  lbt::config::write_csv(out, table, meta);
  out.close();
  if (!out) throw lbt::config::IoError("failed writing '" + path.string() + "'");
  return path;
}

int finish_table(const std::string& directory, const std::string& name, const lbt::config::Table& table,
                 const std::vector<std::string>& meta) {
  const auto path = write_table(directory, name, table, meta);
  std::cout << "wrote " << path.string() << " (" << table.rows.size() << " rows)\n";
  if (!table.all_converged()) {
    std::cerr << "some rows did not converge (converged=false)\n";
    return kNoConvergence;
  }
  return kOk;
}

int cmd_occupation(const Flags& f) {
  const RunConfig cfg = resolve(f);
  if (const auto* d = std::get_if<lbt::LindbladDrive>(&cfg.drive)) {
    std::cout << "n = " << fmt(lbt::transport::occupation_lindblad(d->left)) << "\n";
  } else {
    const auto& fd = std::get<lbt::FermionicDrive>(cfg.drive);
    std::cout << "n = " << fmt(lbt::transport::occupation_fermionic(fd.left, cfg.model.onsite.front(), cfg.quad))
              << "\n";
  }
  return kOk;
}

int cmd_current(const Flags& f) {
  const RunConfig cfg = resolve(f);
  if (const auto* d = std::get_if<lbt::LindbladDrive>(&cfg.drive)) {
    const auto c = lbt::transport::current_lindblad_generic(cfg.model, *d, cfg.quad);
    std::cout << "J = " << fmt(c.j_through) << "\n"
              << "J_L = " << fmt(c.j_left) << "\n"
              << "J_R = " << fmt(c.j_right) << "\n"
              << "J_D = " << fmt(c.j_dissipative) << "\n";
  } else {
    const auto& fd = std::get<lbt::FermionicDrive>(cfg.drive);
    std::cout << "J = " << fmt(lbt::transport::current_free_fermionic(cfg.model, fd, cfg.quad)) << "\n";
  }
  return kOk;
}

int cmd_conductance(const Flags& f) {
  const RunConfig cfg = resolve(f);
  const auto* fd = std::get_if<lbt::FermionicDrive>(&cfg.drive);
  if (fd == nullptr) throw lbt::ValidationError("drive", "conductance needs a fermionic drive");
  const double g = lbt::transport::conductance_finite_t(cfg.model, *fd, cfg.quad);
  std::cout << "g = " << fmt(g) << "\n" << "T*g = " << fmt(fd->left.temperature * g) << "\n";
  return kOk;
}

struct FigureFlags {
  std::string name;
  std::string n;
  std::optional<double> delta, mu, dmu;
  std::string temperatures, rates, bulk = "loss";
  int points = 1001;
};

int cmd_figure(const Flags& f, const FigureFlags& ff) {
  using namespace lbt::runner;
  nlohmann::json echo{{"figure", ff.name}};
  lbt::config::Table table;
  if (ff.name == "resonances") {
    ResonanceOptions opt;
    if (!ff.n.empty()) opt.sizes = parse_list<int>(ff.n, "n");
    if (ff.delta) opt.delta = *ff.delta;
    opt.points = ff.points;
    echo.update({{"sizes", opt.sizes}, {"delta", opt.delta}, {"e_min", opt.e_min}, {"e_max", opt.e_max},
                 {"points", opt.points}});
    table = figure_resonances(opt, f.threads);
  } else if (ff.name == "conductance") {
    ConductanceOptions opt;
    if (!ff.n.empty()) opt.sizes = parse_list<int>(ff.n, "n");
    if (ff.delta) opt.delta = *ff.delta;
    if (ff.mu) opt.mu = *ff.mu;
    if (!ff.temperatures.empty()) opt.temperatures = parse_list<double>(ff.temperatures, "temperatures");
    echo.update({{"sizes", opt.sizes}, {"delta", opt.delta}, {"mu", opt.mu}, {"temperatures", opt.temperatures}});
    table = figure_conductance(opt, f.threads);
  } else if (ff.name == "current-loss" || ff.name == "jd") {
    DissipationOptions opt;
    if (!ff.n.empty()) opt.sizes = parse_list<int>(ff.n, "n");
    if (ff.delta) opt.delta = *ff.delta;
    if (ff.dmu) opt.dmu = *ff.dmu;
    if (!ff.rates.empty()) opt.rates = parse_list<double>(ff.rates, "nu");
    try {
      opt.kind = lbt::bulk_kind_from_string(ff.bulk);
    } catch (const std::invalid_argument& e) {
      throw lbt::ValidationError("bulk", e.what());
    }
    echo.update({{"sizes", opt.sizes}, {"delta", opt.delta}, {"dmu", opt.dmu}, {"nu", opt.resolved_rates()},
                 {"bulk_kind", lbt::to_string(opt.kind)}});
    table = ff.name == "jd" ? figure_jd(opt, f.threads) : figure_current_loss(opt, f.threads);
  } else {
    throw lbt::ValidationError("figure", "unknown figure '" + ff.name +
                                             "' (expected resonances, conductance, current-loss or jd)");
  }
  return finish_table(f.out, ff.name, table, metadata("figure " + ff.name, echo));
}

int cmd_sweep(const Flags& f, const std::string& param, const std::string& values) {
  RunConfig cfg = resolve(f);
  if (!param.empty() || !values.empty()) {
    lbt::config::SweepSpec s = cfg.sweep.value_or(lbt::config::SweepSpec{});
    if (!param.empty()) s.parameter = param;
    if (!values.empty()) s.values = parse_list<double>(values, "values");
    cfg.sweep = s;
  }
  lbt::require(lbt::config::validate(cfg));
  const auto table = lbt::runner::run_sweep(cfg, f.threads);
  return finish_table(cfg.output.directory, "sweep", table, lbt::runner::metadata("sweep", lbt::config::to_json(cfg)));
}

int cmd_oracle_check(const Flags& f, int max_n, std::uint64_t seed) {
  lbt::runner::OracleCheckOptions opt;
  opt.max_n = max_n;
  opt.seed = seed;
  const auto rows = lbt::runner::oracle_check(opt, f.threads);
  std::printf("%3s %5s %5s %3s %12s %12s %12s\n", "N", "nu", "bulk", "#", "|dJ|", "|dJ_D|", "status");
  bool ok = true;
  for (const auto& r : rows) {
    std::printf("%3d %5.2f %5s %3d %12.3e %12.3e %12s\n", r.n_sites, r.nu, lbt::to_string(r.kind), r.sample,
                std::abs(r.j_formula - r.j_oracle), std::abs(r.jd_formula - r.jd_oracle), r.pass ? "ok" : "MISMATCH");
    ok = ok && r.pass;
  }
  if (f.out != ".") {
    const nlohmann::json echo{{"max_n", opt.max_n}, {"seed", opt.seed}, {"drives", opt.drives}, {"nu", opt.rates},
                              {"tolerance", opt.tolerance}};
    write_table(f.out, "oracle-check", lbt::runner::oracle_table(rows), lbt::runner::metadata("oracle-check", echo));
  }
  std::cout << (ok ? "all cases agree within " : "mismatch above ") << opt.tolerance << "\n";
  return ok ? kOk : kInvalid;
}

int cmd_validate(const Flags& f) {
  const RunConfig cfg = resolve(f);
  std::cout << "ok\n" << lbt::config::to_json(cfg).dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state transport through Lindblad- and bath-driven tight-binding chains"};
  app.set_version_flag("--version", std::string(LBT_VERSION));
  app.require_subcommand(1);

  Flags flags;
  FigureFlags fig;
  std::string sweep_param, sweep_values;
  int max_n = 4;
  std::uint64_t seed = 7;

  auto* occupation = app.add_subcommand("occupation", "stationary occupation of a single site (left reservoir)");
  auto* current = app.add_subcommand("current", "steady-state currents");
  auto* conductance = app.add_subcommand("conductance", "linear conductance for a fermionic drive");
  auto* figure = app.add_subcommand("figure", "emit the data behind a figure as CSV");
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter and write currents as CSV");
  auto* oracle = app.add_subcommand("oracle-check", "compare the Keldysh formulas with the exact master equation");
  auto* validate = app.add_subcommand("validate", "check a configuration and print it resolved");

  for (auto* cmd : {occupation, current, conductance, sweep, validate}) add_common(cmd, flags);
  for (auto* cmd : {occupation, current, conductance, sweep, validate}) {
    cmd->add_option("--n", flags.n, "number of sites");
  }

  figure->add_option("name", fig.name, "resonances, conductance, current-loss or jd")->required();
  figure->add_option("--n", fig.n, "comma-separated chain lengths");
  figure->add_option("--delta", fig.delta, "edge hybridization");
  figure->add_option("--mu", fig.mu, "chemical potential (conductance)");
  figure->add_option("--dmu", fig.dmu, "Lindblad bias alpha_L - beta_L (current-loss, jd)");
  figure->add_option("--temperatures", fig.temperatures, "comma-separated temperatures (conductance)");
  figure->add_option("--nu", fig.rates, "comma-separated bulk rates (current-loss, jd)");
  figure->add_option("--bulk", fig.bulk, "loss or gain (current-loss, jd)");
  figure->add_option("--points", fig.points, "energy grid size (resonances)");
  figure->add_option("--out", flags.out, "output directory");
  figure->add_option("--threads", flags.threads, "worker threads (0 = all cores)");

  sweep->add_option("--param", sweep_param, "parameter path, e.g. drive.left.alpha");
  sweep->add_option("--values", sweep_values, "comma-separated values");

  oracle->add_option("--max-n", max_n, "largest chain length (<= 4)");
  oracle->add_option("--seed", seed, "seed for the random drives");
  oracle->add_option("--out", flags.out, "also write the table as CSV into this directory");
  oracle->add_option("--threads", flags.threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*occupation) return cmd_occupation(flags);
    if (*current) return cmd_current(flags);
    if (*conductance) return cmd_conductance(flags);
    if (*figure) return cmd_figure(flags, fig);
    if (*sweep) return cmd_sweep(flags, sweep_param, sweep_values);
    if (*oracle) return cmd_oracle_check(flags, max_n, seed);
    if (*validate) return cmd_validate(flags);
  } catch (const lbt::ValidationError& e) {
    std::cerr << e.report().to_string();
    return kInvalid;
  } catch (const lbt::quad::NonConvergence& e) {
    std::cerr << e.what() << "\n";
    return kNoConvergence;
  } catch (const lbt::config::IoError& e) {
    std::cerr << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
