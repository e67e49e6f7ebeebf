#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lbt/runner.hpp"

using namespace lbt;
using namespace lbt::runner;

namespace {

std::string csv(const config::Table& t) {
  std::ostringstream out;
  config::write_csv(out, t, {"test"});
  return out.str();
}

}  // namespace

TEST_CASE("parallel_for keeps input order") {
  std::vector<std::size_t> out(100);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = i * i; }, 4);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  parallel_for(0, [](std::size_t) { FAIL("called"); }, 4);
}

TEST_CASE("parallel_for rethrows the failure with the lowest index") {
  for (unsigned threads : {1u, 3u}) {
    try {
      parallel_for(
          50,
          [](std::size_t i) {
            if (i % 7 == 3) throw std::runtime_error(std::to_string(i));
          },
          threads);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "3");
    }
  }
}

TEST_CASE("sweeps do not depend on the number of workers") {
  config::RunConfig cfg;
  cfg.model = ChainModel::uniform(4).with_bulk(BulkKind::Loss, 0.0);
  cfg.drive = LindbladDrive{{0.7, 0.3}, {0.3, 0.7}};
  cfg.sweep = config::SweepSpec{"model.bulk_rate", {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}};
  const auto one = run_sweep(cfg, 1);
  const auto four = run_sweep(cfg, 4);
  CHECK(csv(one) == csv(four));
  CHECK(one.columns == std::vector<std::string>{"model.bulk_rate", "j_left", "j_right", "j_through", "j_dissipative"});
  CHECK(one.all_converged());
  // nu = 0: free chain, J = (a_L b_R - b_L a_R)/(Delta (1 + Delta^2)) with Delta = 1
  CHECK(one.rows[0][3] == doctest::Approx(0.4 / 2.0).epsilon(1e-9));

  cfg.drive = FermionicDrive{{0.5, 0.3, 0.1}, {0.5, -0.3, 0.1}};
  cfg.model = ChainModel::uniform(3);
  cfg.sweep = config::SweepSpec{"drive.left.temperature", {0.01, 0.1, 1.0}};
  const auto ferm = run_sweep(cfg, 2);
  CHECK(ferm.columns.size() == 2);
  CHECK(ferm.rows.size() == 3);

  cfg.sweep = config::SweepSpec{"drive.left.alpha", {0.5}};
  CHECK_THROWS_AS(run_sweep(cfg), ValidationError);
}

TEST_CASE("resonance figure") {
  ResonanceOptions opt;
  opt.sizes = {2, 5};
  opt.points = 2001;
  opt.e_min = -2.5;
  opt.e_max = 2.5;
  const auto t = figure_resonances(opt, 2);
  REQUIRE(t.rows.size() == 2 * 2001);
  for (std::size_t s = 0; s < 2; ++s) {
    int peaks = 0;
    for (std::size_t k = 1; k + 1 < 2001; ++k) {
      const double prev = t.rows[s * 2001 + k - 1][2];
      const double cur = t.rows[s * 2001 + k][2];
      const double next = t.rows[s * 2001 + k + 1][2];
      if (cur > prev && cur > next) ++peaks;
    }
    CHECK(peaks == static_cast<int>(opt.sizes[s]));
  }
  opt.points = 1;
  CHECK_THROWS_AS(figure_resonances(opt), ValidationError);
}

TEST_CASE("conductance figure: even and odd chains at low temperature") {
  ConductanceOptions opt;
  opt.sizes = {1, 2, 3, 4};
  opt.temperatures = {0.001, 100.0};
  const auto t = figure_conductance(opt, 2);
  REQUIRE(t.rows.size() == 8);
  // rows: (n, T) in size-major order
  for (std::size_t s = 0; s < 4; ++s) {
    const double cold = t.rows[2 * s][2] * 2 * M_PI;
    if (s % 2 == 0) {
      CHECK(cold > 0.9);
    } else {
      CHECK(cold < 0.5);
    }
  }
  // High temperature: T g is nearly size independent.
  CHECK(std::abs(t.rows[1][3] - t.rows[7][3]) / t.rows[1][3] < 0.2);
}

TEST_CASE("dissipation figures") {
  DissipationOptions opt;
  opt.sizes = {2, 4};
  opt.rates = {0.0, 0.5, 2.0, 10.0, 1000.0};
  const auto jd = figure_jd(opt, 2);
  REQUIRE(jd.rows.size() == 10);
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(jd.rows[5 * s][2] == 0.0);
    for (std::size_t k = 1; k < 5; ++k) CHECK(jd.rows[5 * s + k][2] > jd.rows[5 * s + k - 1][2]);
    CHECK(std::abs(jd.rows[5 * s + 4][2] - 2.0) < 0.02);
  }
  const auto loss = figure_current_loss(opt, 1);
  CHECK(loss.columns.back() == "generic_path");
  CHECK(std::abs(loss.rows[4][2] - 0.4) < 0.01);
  CHECK(loss.rows[4][4] == 0.0);
  CHECK(DissipationOptions{}.resolved_rates().size() == 24);
}

TEST_CASE("small oracle check passes and is reproducible") {
  OracleCheckOptions opt;
  opt.max_n = 2;
  opt.drives = 2;
  const auto rows = oracle_check(opt, 2);
  CHECK(rows.size() == 2 * 3 * 2 * 2);
  for (const auto& r : rows) CHECK(r.pass);
  CHECK(csv(oracle_table(rows)) == csv(oracle_table(oracle_check(opt, 1))));
  opt.max_n = 5;
  CHECK_THROWS_AS(oracle_check(opt), ValidationError);
}

TEST_CASE("metadata lines") {
  const auto m = metadata("sweep", nlohmann::json{{"a", 1}});
  REQUIRE(m.size() == 2);
  CHECK(m[0].rfind("lbt ", 0) == 0);
  CHECK(m[1] == "config {\"a\":1}");
}
