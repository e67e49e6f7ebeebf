#include "lbt/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace lbt::transport {

namespace {

using greens::cplx;
using greens::EdgeWidths;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_no_bulk(const ChainModel& model, const char* what) {
  if (model.effective_bulk_rate() != 0.0) {
    ValidationReport r;
    r.violations.push_back({"model.bulk_rate", std::string(what) + " requires a chain without bulk loss/gain"});
    throw ValidationError(r);
  }
}

double band_half_width(const std::vector<double>& levels) {
  double hw = 0.0;
  for (double e : levels) hw = std::max(hw, std::abs(e));
  return hw;
}

quad::IntegrandProfile band_profile(const ChainModel& model, EdgeWidths widths, const QuadratureSpec& spec) {
  const auto levels = chain_levels(model);
  quad::Band band{band_half_width(levels), std::max(widths.left, widths.right) + model.effective_bulk_rate()};
  return {band, spec, levels};
}

quad::IntegrandProfile fermi_profile(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& spec) {
  const auto levels = chain_levels(model);
  quad::FermiWindow window{drive.left.mu, drive.right.mu, std::max(drive.left.temperature, drive.right.temperature),
                           band_half_width(levels)};
  return {window, spec, levels};
}

double integrate_or_throw(const quad::Integrand& f, const quad::IntegrandProfile& profile) {
  return quad::integrate(f, profile).value / kTwoPi;
}

}  // namespace

CurrentResult CurrentResult::from_edges(double j_left, double j_right) {
  return {j_left, j_right, 0.5 * (j_left + j_right), j_left - j_right};
}

CurrentResult CurrentResult::from_through(double j_through, double j_dissipative) {
  return {j_through + 0.5 * j_dissipative, j_through - 0.5 * j_dissipative, j_through, j_dissipative};
}

CouplingMatrices CouplingMatrices::build(int n_sites, EdgeWidths widths) {
  CouplingMatrices c;
  c.gamma_l = Eigen::VectorXd::Zero(n_sites);
  c.gamma_r = Eigen::VectorXd::Zero(n_sites);
  c.gamma_l(0) = 2.0;
  c.gamma_r(n_sites - 1) = 2.0;
  c.big_gamma_l = widths.left * c.gamma_l;
  c.big_gamma_r = widths.right * c.gamma_r;
  return c;
}

std::vector<double> chain_levels(const ChainModel& model) {
  require(validate(model));
  const int n = model.n_sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) h(j, j) = model.onsite[j];
  for (int j = 0; j + 1 < n; ++j) h(j, j + 1) = h(j + 1, j) = model.hopping;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double fermi(double eps, const FermionicReservoir& res) {
  if (res.temperature == 0.0) {
    if (eps < res.mu) return 1.0;
    if (eps > res.mu) return 0.0;
    return 0.5;
  }
  const double x = (eps - res.mu) / res.temperature;
  if (x > 0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double fermi_derivative(double eps, const FermionicReservoir& res) {
  if (!(res.temperature > 0)) throw std::domain_error("-df/de is a delta function at T = 0");
  const double c = std::cosh(0.5 * (eps - res.mu) / res.temperature);
  return 1.0 / (4.0 * res.temperature * c * c);
}

LindbladReservoir map_fermionic_to_lindblad(const FermionicReservoir& res) {
  require(validate(res));
  double t = 0.0;
  if (res.temperature > 0) {
    t = std::tanh(0.5 * res.mu / res.temperature);
  } else if (res.mu > 0) {
    t = 1.0;
  } else if (res.mu < 0) {
    t = -1.0;
  }
  return {0.5 * res.delta * (1.0 + t), 0.5 * res.delta * (1.0 - t)};
}

double occupation_lindblad(const LindbladReservoir& res) {
  require(validate(res));
  return res.alpha / res.width();
}

double occupation_fermionic(const FermionicReservoir& res, double eps0, const QuadratureSpec& quad) {
  require(validate(res));
  const double d = res.delta;
  std::vector<double> pts{eps0, res.mu};
  for (double k : {1.0, 10.0, 100.0}) {
    pts.push_back(eps0 - k * d);
    pts.push_back(eps0 + k * d);
  }
  if (res.temperature > 0) {
    pts.push_back(res.mu - 40.0 * res.temperature);
    pts.push_back(res.mu + 40.0 * res.temperature);
  }
  // 1 - tanh((e - mu)/2T) = 2 f(e), written without cancellation.
  auto f = [&](double e) {
    const double x = e - eps0;
    return 2.0 * fermi(e, res) * d / (x * x + d * d);
  };
  return quad::integrate_unbounded(f, quad, pts).value / kTwoPi;
}

CurrentResult current_lindblad_generic(const ChainModel& model, const LindbladDrive& drive, const QuadratureSpec& quad) {
  require(validate(model, Drive{drive}));
  const int n = model.n_sites;
  const EdgeWidths widths = greens::edge_widths(drive);

  // i G^K_kk = -sum_j G^R_kj (i src_j) G^A_jk = -2 sum_j w_j |G^R_kj|^2,
  // with src = -2i w the diagonal of [G^K]^{-1}.
  Eigen::VectorXd w = (greens::keldysh_source(model, drive) * cplx(0.0, 0.5)).real();
  auto ig_k = [&](double eps) {
    const auto rows = greens::retarded_edge_rows(model, widths, eps);
    const double first = -2.0 * (rows.first.cwiseAbs2().cwiseProduct(w)).sum();
    const double last = -2.0 * (rows.last.cwiseAbs2().cwiseProduct(w)).sum();
    return std::pair{first, last};
  };
  const double dl = widths.left;
  const double dr = widths.right;
  const auto profile = band_profile(model, widths, quad);

  // Tr[gamma_L X] = 2 X_11, so (i/2) Tr[(dl gamma_L -+ dr gamma_R) G^K]
  // = dl iG^K_11 -+ dr iG^K_NN.
  const double through_integral = integrate_or_throw(
      [&](double eps) {
        const auto [first, last] = ig_k(eps);
        return dl * first - dr * last;
      },
      profile);
  const double loss_integral = integrate_or_throw(
      [&](double eps) {
        const auto [first, last] = ig_k(eps);
        return dl * first + dr * last;
      },
      profile);
  (void)n;

  const double bias_l = drive.left.bias();
  const double bias_r = drive.right.bias();
  const double j_through = 0.5 * ((bias_l - bias_r) + through_integral);
  // The rate equations give J_D = (a_L + a_R) + (i/2) int Tr[...]; the bias
  // constant cancels only for antisymmetric drives.
  const double j_dissipative = (bias_l + bias_r) + loss_integral;
  return CurrentResult::from_through(j_through, j_dissipative);
}

double current_meir_wingreen(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& quad) {
  require(validate(model, Drive{drive}));
  require_no_bulk(model, "the Meir-Wingreen current");
  const int n = model.n_sites;
  const EdgeWidths widths = greens::edge_widths(drive);
  const CouplingMatrices coupling = CouplingMatrices::build(n, widths);
  const std::array<int, 2> edge_sites{0, n - 1};

  auto integrand = [&](double eps) {
    const double fl = fermi(eps, drive.left);
    const double fr = fermi(eps, drive.right);
    const auto rows = greens::retarded_edge_rows(model, widths, eps);
    const Eigen::VectorXd weight = fl * coupling.big_gamma_l + fr * coupling.big_gamma_r;
    cplx trace = 0.0;
    // Gamma_L and Gamma_R only touch the edge sites. G^K on the diagonal
    // follows from (G^A - G^R + G^K)/2 = i G^R (f_L Gamma_L + f_R Gamma_R) G^A.
    for (std::size_t e = 0; e < edge_sites.size(); ++e) {
      const int k = edge_sites[e];
      if (e == 1 && n == 1) break;
      const Eigen::VectorXcd& row = (e == 0) ? rows.first : rows.last;
      const cplx gr_minus_ga = row(k) - std::conj(row(k));
      const cplx g_k = gr_minus_ga + cplx(0.0, 2.0) * row.cwiseAbs2().dot(weight);
      trace += ((fl - 0.5) * coupling.big_gamma_l(k) - (fr - 0.5) * coupling.big_gamma_r(k)) * gr_minus_ga +
               0.5 * (coupling.big_gamma_l(k) - coupling.big_gamma_r(k)) * g_k;
    }
    return (cplx(0.0, 0.5) * trace).real();
  };
  return integrate_or_throw(integrand, fermi_profile(model, drive, quad));
}

double current_free_fermionic(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& quad) {
  require(validate(model, Drive{drive}));
  require_no_bulk(model, "the Landauer current");
  const EdgeWidths widths = greens::edge_widths(drive);
  auto integrand = [&](double eps) {
    const double df = fermi(eps, drive.left) - fermi(eps, drive.right);
    if (df == 0.0) return 0.0;
    return df * transmission(model, widths, eps);
  };
  return integrate_or_throw(integrand, fermi_profile(model, drive, quad));
}

double current_free_lindblad(const ChainModel& model, const LindbladDrive& drive, const QuadratureSpec& quad) {
  require(validate(model, Drive{drive}));
  require_no_bulk(model, "the free Lindblad current");
  const EdgeWidths widths = greens::edge_widths(drive);
  const int n = model.n_sites;
  auto integrand = [&](double eps) {
    const auto rows = greens::retarded_edge_rows(model, widths, eps);
    return 4.0 * std::norm(rows.first(n - 1));
  };
  const double bias = drive.left.alpha * drive.right.beta - drive.left.beta * drive.right.alpha;
  return bias * integrate_or_throw(integrand, band_profile(model, widths, quad));
}

DissipativeChainResult current_dissipative_chain(const ChainModel& model, const LindbladDrive& drive,
                                                 const QuadratureSpec& quad) {
  require(validate(model, Drive{drive}));
  const EdgeWidths widths = greens::edge_widths(drive);
  const double delta = widths.left;
  const double dmu = drive.left.bias();
  const double scale = std::max(1.0, delta);
  const bool symmetric = model.n_sites >= 2 && model.hopping != 0 && model.has_uniform_onsite() &&
                         std::abs(widths.left - widths.right) <= 1e-12 * scale &&
                         std::abs(drive.left.bias() + drive.right.bias()) <= 1e-12 * scale;
  if (!symmetric) return {current_lindblad_generic(model, drive, quad), true};

  const int n = model.n_sites;
  const double nu = model.effective_bulk_rate();
  auto chain = [&](double eps) {
    return greens::ClosedFormChain({eps - model.onsite.front(), delta, nu, n, model.hopping});
  };
  const auto profile = band_profile(model, widths, quad);
  const double edge_integral = integrate_or_throw(
      [&](double eps) {
        const auto g = chain(eps);
        return -std::norm(g(1, 1)) + std::norm(g(1, n));
      },
      profile);
  const double j_through = dmu * (1.0 + 2.0 * delta * edge_integral);

  double j_dissipative = 0.0;
  if (nu > 0) {
    const double row_integral = integrate_or_throw(
        [&](double eps) {
          const auto g = chain(eps);
          double sum = 0.0;
          for (int j = 1; j <= n; ++j) sum += std::norm(g(1, j));
          return sum;
        },
        profile);
    j_dissipative = model.bulk_sign() * 4.0 * delta * nu * row_integral;
  }
  return {CurrentResult::from_through(j_through, j_dissipative), false};
}

double transmission(const ChainModel& model, EdgeWidths widths, double eps) {
  const auto rows = greens::retarded_edge_rows(model, widths, eps);
  return 4.0 * widths.left * widths.right * std::norm(rows.first(model.n_sites - 1));
}

double conductance_high_t(const ChainModel& model, double delta, double temperature, const QuadratureSpec& quad) {
  require(validate(model));
  require_no_bulk(model, "the high-temperature conductance");
  if (!(delta > 0)) throw std::invalid_argument("hybridization must be > 0");
  if (!(temperature > 0)) throw std::invalid_argument("temperature must be > 0");
  const EdgeWidths widths{delta, delta};
  auto integrand = [&](double eps) { return transmission(model, widths, eps); };
  return integrate_or_throw(integrand, band_profile(model, widths, quad)) / (4.0 * temperature);
}

double conductance_finite_t(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& quad) {
  require(validate(model, Drive{drive}));
  require_no_bulk(model, "the linear conductance");
  if (drive.left.mu != drive.right.mu || drive.left.temperature != drive.right.temperature) {
    throw std::invalid_argument("linear conductance needs equal chemical potentials and temperatures");
  }
  const EdgeWidths widths = greens::edge_widths(drive);
  if (drive.left.temperature == 0.0) return transmission(model, widths, drive.left.mu) / kTwoPi;
  auto integrand = [&](double eps) { return fermi_derivative(eps, drive.left) * transmission(model, widths, eps); };
  return integrate_or_throw(integrand, fermi_profile(model, drive, quad));
}

double bounding_current(int power, const FermionicDrive& drive, const QuadratureSpec& quad) {
  require(validate(Drive{drive}));
  if (power < 0) throw std::invalid_argument("bounding power must be >= 0");
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<double> pts;
  for (double mu : {drive.left.mu, drive.right.mu}) {
    if (std::abs(mu) < 2.0) pts.push_back(std::asin(0.5 * mu));
  }
  auto integrand = [&](double theta) {
    const double e = 2.0 * std::sin(theta);
    return (fermi(e, drive.left) - fermi(e, drive.right)) * std::pow(std::cos(theta), power);
  };
  return quad::integrate_finite(integrand, -half_pi, half_pi, quad, pts).value / std::numbers::pi;
}

}  // namespace lbt::transport
