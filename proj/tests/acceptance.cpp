// Acceptance checks, one line per criterion:
//   acceptance [--criterion N]
// Exits non-zero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lbt/greens.hpp"
#include "lbt/oracle.hpp"
#include "lbt/runner.hpp"
#include "lbt/transport.hpp"

using namespace lbt;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double lbias(const LindbladDrive& d) { return d.left.alpha * d.right.beta - d.left.beta * d.right.alpha; }

LindbladDrive symmetric(double delta, double dmu) {
  return {{0.5 * (delta + dmu), 0.5 * (delta - dmu)}, {0.5 * (delta - dmu), 0.5 * (delta + dmu)}};
}

double fermi_dirac(double e, double mu, double t) { return 1.0 / (1.0 + std::exp((e - mu) / t)); }

Outcome single_site() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const LindbladDrive d{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const double expected = 2 * lbias(d) / (d.left.width() + d.right.width());
    const double j = transport::current_lindblad_generic(ChainModel::uniform(1), d).j_through;
    worst = std::max(worst, std::abs(j - expected));
  }
  double spread = 0.0;
  const LindbladDrive d{{0.8, 0.3}, {0.1, 0.6}};
  const double j0 = transport::current_lindblad_generic(ChainModel::uniform(1, 1.0, 0.0), d).j_through;
  for (int k = 0; k <= 20; ++k) {
    const double eps0 = -5.0 + 0.5 * k;
    spread = std::max(spread,
                      std::abs(transport::current_lindblad_generic(ChainModel::uniform(1, 1.0, eps0), d).j_through - j0));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && spread < 1e-9 && secs < 1.0,
          fmt("max |dJ| %.2e, eps0 spread %.2e", worst, spread) + fmt(", %.3f s", secs)};
}

Outcome free_chain() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double delta : {0.3, 1.0, 3.0}) {
    const LindbladDrive d = symmetric(delta, 0.3 * delta);
    const double expected = lbias(d) / (delta * (1 + delta * delta));
    for (int n = 2; n <= 30; ++n) {
      const double j = transport::current_free_lindblad(ChainModel::uniform(n), d);
      worst = std::max(worst, std::abs(j - expected) / expected);
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-7 && secs < 10.0, fmt("max rel err %.2e, %.2f s", worst, secs)};
}

Outcome occupation_limits() {
  double narrow = 0.0;
  for (auto [mu, t, eps0] : {std::tuple{0.0, 1.0, 1.0}, {0.5, 0.2, 0.3}, {-0.3, 0.5, 0.1}}) {
    const double n = transport::occupation_fermionic({1e-6, mu, t}, eps0);
    narrow = std::max(narrow, std::abs(n - fermi_dirac(eps0, mu, t)));
  }
  double hot = 0.0;
  for (auto [delta, eps0] : {std::pair{1.0, 0.3}, {1.0, -0.7}, {2.0, 0.5}}) {
    const double scale = 1e3 * std::max(delta, std::abs(eps0));
    const FermionicReservoir r{delta, scale, scale};
    const double n = transport::occupation_fermionic(r, eps0);
    hot = std::max(hot, std::abs(n - transport::occupation_lindblad(transport::map_fermionic_to_lindblad(r))));
  }
  return {narrow < 1e-4 && hot < 1e-3, fmt("narrow level %.2e, hot bath %.2e", narrow, hot)};
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  runner::OracleCheckOptions opt;
  const auto rows = runner::oracle_check(opt, 0);
  double worst_j = 0.0, worst_jd = 0.0;
  bool all = true;
  for (const auto& r : rows) {
    worst_j = std::max(worst_j, std::abs(r.j_formula - r.j_oracle));
    worst_jd = std::max(worst_jd, std::abs(r.jd_formula - r.jd_oracle));
    all = all && r.pass;
  }
  const double secs = seconds_since(t0);
  return {all && secs < 30.0, std::to_string(rows.size()) + " cases, " +
                                  fmt("max |dJ| %.2e, max |dJ_D| %.2e", worst_j, worst_jd) + fmt(", %.2f s", secs)};
}

Outcome mw_landauer() {
  const QuadratureSpec tight{1e-11, 1e-14, 8000, std::nullopt};
  const std::vector<FermionicDrive> drives{
      {{0.5, 0.2, 0.05}, {0.5, -0.2, 0.05}},
      {{0.3, 1.0, 0.5}, {0.8, -0.5, 0.2}},
      {{1.0, 0.1, 0.0}, {0.4, 0.0, 1.0}},
  };
  double worst = 0.0;
  for (int n : {1, 3, 5}) {
    for (const auto& d : drives) {
      const double mw = transport::current_meir_wingreen(ChainModel::uniform(n), d, tight);
      const double lb = transport::current_free_fermionic(ChainModel::uniform(n), d, tight);
      worst = std::max(worst, std::abs(mw - lb) / std::abs(lb));
    }
  }
  return {worst < 1e-9, fmt("max rel diff %.2e", worst)};
}

Outcome high_t_identity() {
  const QuadratureSpec tight{1e-12, 1e-15, 8000, std::nullopt};
  const double delta = 0.8;
  const double temperature = 3.0;
  const LindbladDrive d = symmetric(delta, 0.3);
  double worst = 0.0, ratio = 0.0, corrected = 0.0;
  for (int n : {2, 5}) {
    const ChainModel m = ChainModel::uniform(n);
    const double j = transport::current_free_lindblad(m, d, tight);
    const double tg = temperature * transport::conductance_high_t(m, delta, temperature, tight);
    const double c = lbias(d) / (4 * delta * delta);
    worst = std::max(worst, std::abs(j - c * tg) / j);
    ratio = j / (c * tg);
    corrected = std::max(corrected, std::abs(j - 4 * lbias(d) / (delta * delta) * tg) / j);
  }
  std::printf("       info: J / (c T g) = %.12g; with c = 4 (a_L b_R - b_L a_R)/(D_R D_L) the rel err is %.2e\n",
              ratio, corrected);
  return {worst < 1e-9, fmt("max rel err %.3g with the stated prefactor", worst)};
}

Outcome large_nu() {
  const LindbladDrive d = symmetric(1.0, 0.4);
  double wj = 0.0, wjd = 0.0;
  for (int n : {3, 6}) {
    const auto r = transport::current_dissipative_chain(ChainModel::uniform(n).with_bulk(BulkKind::Loss, 1e3), d);
    wj = std::max(wj, std::abs(r.current.j_through - 0.4) / 0.4);
    wjd = std::max(wjd, std::abs(r.current.j_dissipative - 2.0) / 2.0);
  }
  return {wj < 0.01 && wjd < 0.01, fmt("rel err J %.2e, J_D %.2e", wj, wjd)};
}

Outcome non_monotonic() {
  const LindbladDrive d = symmetric(1.0, 0.4);
  std::vector<double> j;
  for (int k = 0; k <= 20; ++k) {
    j.push_back(transport::current_dissipative_chain(ChainModel::uniform(6).with_bulk(BulkKind::Loss, 0.2 * k), d)
                    .current.j_through);
  }
  const auto k_min = static_cast<std::size_t>(std::min_element(j.begin(), j.end()) - j.begin());
  bool shape = k_min > 0 && k_min + 1 < j.size();
  for (std::size_t k = 1; k < j.size() && shape; ++k) shape = (k <= k_min) ? j[k] < j[k - 1] : j[k] > j[k - 1];
  return {shape, fmt("minimum J = %.6f at nu = %.1f", j[k_min], 0.2 * static_cast<double>(k_min))};
}

Outcome loss_gain() {
  const LindbladDrive d = symmetric(1.0, 0.4);
  double wj = 0.0, wjd = 0.0;
  for (double nu : {0.2, 1.0}) {
    for (int n : {2, 4}) {
      const auto l = transport::current_lindblad_generic(ChainModel::uniform(n).with_bulk(BulkKind::Loss, nu), d);
      const auto g = transport::current_lindblad_generic(ChainModel::uniform(n).with_bulk(BulkKind::Gain, nu), d);
      wj = std::max(wj, std::abs(l.j_through - g.j_through));
      wjd = std::max(wjd, std::abs(l.j_dissipative + g.j_dissipative));
    }
  }
  return {wj < 1e-10 && wjd < 1e-10, fmt("|dJ| %.2e, |J_D + J_D'| %.2e", wj, wjd)};
}

Outcome structural() {
  const cplx i{0.0, 1.0};
  // Sum rule, entrywise.
  const ChainModel m = ChainModel::uniform(3, 1.0, 0.2).with_bulk(BulkKind::Loss, 0.3);
  const greens::EdgeWidths w{0.5, 0.8};
  const quad::IntegrandProfile profile{quad::Band{2.5, 1.1}, {1e-10, 1e-12, 4000, std::nullopt}, {}};
  double sum_rule = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (bool imag : {false, true}) {
        const double v = quad::integrate(
                             [&](double e) {
                               const auto g = greens::retarded_chain_dense(m, w, e);
                               const cplx x = i * (g(a, b) - std::conj(g(b, a)));
                               return imag ? x.imag() : x.real();
                             },
                             profile)
                             .value /
                         (2 * kPi);
        sum_rule = std::max(sum_rule, std::abs(v - ((a == b && !imag) ? 1.0 : 0.0)));
      }
    }
  }
  // Advanced = adjoint, and G^R - G^A = -i G^R Gamma G^A without bulk terms.
  double adjoint = 0.0, identity = 0.0;
  ChainModel free = ChainModel::uniform(4);
  free.onsite = {0.3, -0.1, 0.0, 0.6};
  const LindbladDrive d{{0.7, 0.2}, {0.15, 0.45}};
  const auto c = transport::CouplingMatrices::build(4, greens::edge_widths(d));
  const Eigen::MatrixXcd gamma = (c.big_gamma_l + c.big_gamma_r).cast<cplx>().asDiagonal();
  for (double e : {-2.2, -0.5, 0.0, 1.3}) {
    const auto s = greens::green_set(free, d, e);
    adjoint = std::max(adjoint, (s.g_a - s.g_r.adjoint()).cwiseAbs().maxCoeff());
    identity = std::max(identity, (s.g_r - s.g_a + i * s.g_r * gamma * s.g_a).cwiseAbs().maxCoeff());
  }
  // One transmission peak per level.
  bool peaks_ok = true;
  for (int n = 1; n <= 8; ++n) {
    const ChainModel chain = ChainModel::uniform(n);
    std::vector<double> y;
    for (int k = 0; k <= 40000; ++k) {
      y.push_back(std::norm(greens::retarded_edge_rows(chain, {0.1, 0.1}, -2.0 + 4.0 * k / 40000.0).first(n - 1)));
    }
    int peaks = 0;
    for (std::size_t k = 1; k + 1 < y.size(); ++k) peaks += (y[k] > y[k - 1] && y[k] >= y[k + 1]);
    peaks_ok = peaks_ok && peaks == n;
  }
  const bool pass = sum_rule < 1e-6 && adjoint < 1e-12 && identity < 1e-12 && peaks_ok;
  return {pass, fmt("sum rule %.1e, adjoint %.1e", sum_rule, adjoint) + fmt(", identity %.1e, peaks ", identity) +
                    (peaks_ok ? "ok" : "wrong")};
}

Outcome bounds() {
  const FermionicDrive d{{1.0, 0.3, 0.5}, {1.0, -0.3, 0.5}};
  const double jf = transport::current_free_fermionic(ChainModel::uniform(40), d);
  const double j1 = transport::bounding_current(1, d);
  const double j3 = transport::bounding_current(3, d);
  char buf[160];
  std::snprintf(buf, sizeof buf, "J_3 = %.6f, J_F = %.6f, J_1 = %.6f", j3, jf, j1);
  return {j3 < jf && jf < j1, buf};
}

Outcome even_odd() {
  bool ok = true;
  std::string values;
  for (int n = 2; n <= 9; ++n) {
    const double t = transport::transmission(ChainModel::uniform(n), {0.1, 0.1}, 0.0);
    ok = ok && ((n % 2 == 1) ? t > 0.9 : t < 0.5);
    values += fmt(n == 2 ? "%.3f" : " %.3f", t);
  }
  return {ok, "T(0) for N = 2..9: " + values};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--criterion" && a + 1 < argc) {
      only = std::atoi(argv[++a]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> all{
      {1, "single-site Lindblad current and eps0 independence", single_site},
      {2, "free-chain Lindblad current is size independent", free_chain},
      {3, "occupation limits", occupation_limits},
      {4, "generic currents match the exact master equation", oracle_equivalence},
      {5, "Meir-Wingreen and Landauer agree", mw_landauer},
      {6, "Lindblad current as a multiple of T g", high_t_identity},
      {7, "large bulk-rate limits", large_nu},
      {8, "current is non-monotonic in the loss rate", non_monotonic},
      {9, "loss and gain give the same current", loss_gain},
      {10, "structural invariants of the Green functions", structural},
      {11, "bounding integrals bracket the long-chain current", bounds},
      {12, "even/odd transmission at the band centre", even_odd},
  };
  int failures = 0;
  bool ran = false;
  for (const auto& c : all) {
    if (only != 0 && c.id != only) continue;
    ran = true;
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str());
    failures += !o.pass;
  }
  if (!ran) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
