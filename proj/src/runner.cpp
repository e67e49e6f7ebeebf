#include "lbt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "lbt/greens.hpp"
#include "lbt/oracle.hpp"
#include "lbt/transport.hpp"

namespace lbt::runner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

LindbladDrive symmetric_drive(double delta, double dmu) {
  return {{0.5 * (delta + dmu), 0.5 * (delta - dmu)}, {0.5 * (delta - dmu), 0.5 * (delta + dmu)}};
}

}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task, unsigned threads) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failure_index = count;
  std::mutex guard;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        // Keep the error of the lowest index so failures are reproducible.
        std::lock_guard lock(guard);
        if (i < failure_index) {
          failure_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

PointResult evaluate_current(const config::RunConfig& cfg) {
  PointResult out;
  if (const auto* d = std::get_if<LindbladDrive>(&cfg.drive)) {
    out.columns = {"j_left", "j_right", "j_through", "j_dissipative"};
    try {
      const auto c = transport::current_lindblad_generic(cfg.model, *d, cfg.quad);
      out.values = {c.j_left, c.j_right, c.j_through, c.j_dissipative};
    } catch (const quad::NonConvergence&) {
      out.values.assign(4, kNaN);
      out.converged = false;
    }
    return out;
  }
  out.columns = {"j_through"};
  try {
    out.values = {transport::current_free_fermionic(cfg.model, std::get<FermionicDrive>(cfg.drive), cfg.quad)};
  } catch (const quad::NonConvergence&) {
    out.values = {kNaN};
    out.converged = false;
  }
  return out;
}

config::Table run_sweep(const config::RunConfig& cfg, unsigned threads) {
  require(config::validate(cfg));
  if (!cfg.sweep) throw ValidationError("sweep", "no sweep configured");
  const auto& values = cfg.sweep->values;
  std::vector<config::RunConfig> points(values.size(), cfg);
  for (std::size_t i = 0; i < values.size(); ++i) {
    config::set_parameter(points[i], cfg.sweep->parameter, values[i]);
    require(config::validate(points[i]));
  }
  std::vector<PointResult> results(values.size());
  parallel_for(values.size(), [&](std::size_t i) { results[i] = evaluate_current(points[i]); }, threads);

  config::Table table;
  table.columns = {cfg.sweep->parameter};
  table.columns.insert(table.columns.end(), results.front().columns.begin(), results.front().columns.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<double> row{values[i]};
    row.insert(row.end(), results[i].values.begin(), results[i].values.end());
    table.add(std::move(row), results[i].converged);
  }
  return table;
}

config::Table figure_resonances(const ResonanceOptions& opt, unsigned threads) {
  if (opt.sizes.empty() || opt.points < 2 || !(opt.delta > 0) || !(opt.e_max > opt.e_min)) {
    throw ValidationError("figure.resonances", "need sizes, delta > 0, at least two points and e_max > e_min");
  }
  const std::size_t per = static_cast<std::size_t>(opt.points);
  std::vector<std::vector<double>> rows(opt.sizes.size() * per);
  parallel_for(
      opt.sizes.size(),
      [&](std::size_t s) {
        const int n = opt.sizes[s];
        const ChainModel model = ChainModel::uniform(n);
        require(validate(model));
        for (std::size_t k = 0; k < per; ++k) {
          const double e = opt.e_min + (opt.e_max - opt.e_min) * static_cast<double>(k) / static_cast<double>(per - 1);
          const auto g = greens::retarded_edge_rows(model, {opt.delta, opt.delta}, e);
          rows[s * per + k] = {static_cast<double>(n), e, std::norm(g.first(n - 1))};
        }
      },
      threads);
  config::Table table;
  table.columns = {"n_sites", "energy", "abs_g1n_sq"};
  for (auto& r : rows) table.add(std::move(r));
  return table;
}

config::Table figure_conductance(const ConductanceOptions& opt, unsigned threads) {
  struct Job {
    int n;
    double t;
  };
  std::vector<Job> jobs;
  for (int n : opt.sizes) {
    for (double t : opt.temperatures) jobs.push_back({n, t});
  }
  std::vector<std::vector<double>> rows(jobs.size());
  std::vector<char> ok(jobs.size(), 1);
  parallel_for(
      jobs.size(),
      [&](std::size_t i) {
        const auto [n, t] = jobs[i];
        const FermionicReservoir res{opt.delta, opt.mu, t};
        double g = kNaN;
        try {
          g = transport::conductance_finite_t(ChainModel::uniform(n), FermionicDrive{res, res}, opt.quad);
        } catch (const quad::NonConvergence&) {
          ok[i] = 0;
        }
        rows[i] = {static_cast<double>(n), t, g, t * g};
      },
      threads);
  config::Table table;
  table.columns = {"n_sites", "temperature", "conductance", "t_times_g"};
  for (std::size_t i = 0; i < rows.size(); ++i) table.add(std::move(rows[i]), ok[i] != 0);
  return table;
}

std::vector<double> DissipationOptions::resolved_rates() const {
  if (!rates.empty()) return rates;
  std::vector<double> out;
  for (int k = 0; k <= 20; ++k) out.push_back(0.2 * k);
  for (double big : {10.0, 100.0, 1000.0}) out.push_back(big);
  return out;
}

namespace {

struct DissipationRow {
  int n;
  double nu;
  transport::DissipativeChainResult result;
  bool ok = true;
};

std::vector<DissipationRow> dissipation_rows(const DissipationOptions& opt, unsigned threads) {
  const LindbladDrive drive = symmetric_drive(opt.delta, opt.dmu);
  require(validate(Drive{drive}));
  std::vector<DissipationRow> rows;
  for (int n : opt.sizes) {
    for (double nu : opt.resolved_rates()) rows.push_back({n, nu, {}, true});
  }
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        auto& row = rows[i];
        const ChainModel model = ChainModel::uniform(row.n).with_bulk(opt.kind, row.nu);
        try {
          row.result = transport::current_dissipative_chain(model, drive, opt.quad);
        } catch (const quad::NonConvergence&) {
          row.result.current = {kNaN, kNaN, kNaN, kNaN};
          row.ok = false;
        }
      },
      threads);
  return rows;
}

}  // namespace

config::Table figure_current_loss(const DissipationOptions& opt, unsigned threads) {
  config::Table table;
  table.columns = {"n_sites", "nu", "j_through", "j_dissipative", "generic_path"};
  for (const auto& r : dissipation_rows(opt, threads)) {
    table.add({static_cast<double>(r.n), r.nu, r.result.current.j_through, r.result.current.j_dissipative,
               r.result.generic_path ? 1.0 : 0.0},
              r.ok);
  }
  return table;
}

config::Table figure_jd(const DissipationOptions& opt, unsigned threads) {
  config::Table table;
  table.columns = {"n_sites", "nu", "j_dissipative"};
  for (const auto& r : dissipation_rows(opt, threads)) {
    table.add({static_cast<double>(r.n), r.nu, r.result.current.j_dissipative}, r.ok);
  }
  return table;
}

std::vector<OracleCheckRow> oracle_check(const OracleCheckOptions& opt, unsigned threads) {
  if (opt.max_n < 1 || opt.max_n > oracle::kMaxSites) {
    throw ValidationError("max_n", "oracle supports 1 to " + std::to_string(oracle::kMaxSites) + " sites");
  }
  // All random draws happen up front, in a fixed order, so the table does
  // not depend on the number of workers.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> rate(0.05, 1.5);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  std::vector<OracleCheckRow> rows;
  for (int n = 1; n <= opt.max_n; ++n) {
    for (double nu : opt.rates) {
      for (BulkKind kind : {BulkKind::Loss, BulkKind::Gain}) {
        for (int s = 0; s < opt.drives; ++s) {
          OracleCheckRow row{};
          row.n_sites = n;
          row.nu = nu;
          row.kind = kind;
          row.sample = s;
          row.drive = {{rate(rng), rate(rng)}, {rate(rng), rate(rng)}};
          for (int j = 0; j < n; ++j) row.onsite.push_back(level(rng));
          rows.push_back(std::move(row));
        }
      }
    }
  }
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        auto& row = rows[i];
        ChainModel model = ChainModel::uniform(row.n_sites).with_bulk(row.kind, row.nu);
        model.onsite = row.onsite;
        const auto formula = transport::current_lindblad_generic(model, row.drive, opt.quad);
        const auto exact = oracle::solve(model, row.drive);
        row.j_formula = formula.j_through;
        row.jd_formula = formula.j_dissipative;
        row.j_oracle = exact.currents.j_through;
        row.jd_oracle = exact.currents.j_dissipative;
        row.conservation_defect = exact.conservation_defect;
        row.pass = std::abs(row.j_formula - row.j_oracle) <= opt.tolerance &&
                   std::abs(row.jd_formula - row.jd_oracle) <= opt.tolerance &&
                   row.conservation_defect <= opt.tolerance;
      },
      threads);
  return rows;
}

config::Table oracle_table(const std::vector<OracleCheckRow>& rows) {
  config::Table table;
  table.columns = {"n_sites", "nu", "bulk_sign", "sample", "j_formula", "j_oracle", "abs_err_j",
                   "jd_formula", "jd_oracle", "abs_err_jd", "pass"};
  for (const auto& r : rows) {
    const double sign = r.kind == BulkKind::Loss ? 1.0 : -1.0;
    table.add({static_cast<double>(r.n_sites), r.nu, sign, static_cast<double>(r.sample), r.j_formula, r.j_oracle,
               std::abs(r.j_formula - r.j_oracle), r.jd_formula, r.jd_oracle, std::abs(r.jd_formula - r.jd_oracle),
               r.pass ? 1.0 : 0.0});
  }
  return table;
}

std::vector<std::string> metadata(const std::string& command, const nlohmann::json& resolved) {
  return {std::string("lbt ") + LBT_VERSION + " " + command, "config " + resolved.dump()};
}

}  // namespace lbt::runner
