#include "lbt/greens.hpp"

#include <cmath>
#include <string>

namespace lbt::greens {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_widths(EdgeWidths widths) {
  if (!(widths.left >= 0) || !(widths.right >= 0)) throw std::invalid_argument("edge widths must be >= 0");
}

}  // namespace

OnShellSingularity::OnShellSingularity(double energy)
    : std::domain_error("on-shell singularity: energy " + std::to_string(energy) +
                        " is an eigenvalue of an unbroadened chain"),
      energy_(energy) {}

EdgeWidths edge_widths(const LindbladDrive& drive) { return {drive.left.width(), drive.right.width()}; }

EdgeWidths edge_widths(const FermionicDrive& drive) { return {drive.left.delta, drive.right.delta}; }

EdgeWidths edge_widths(const Drive& drive) {
  return std::visit([](const auto& d) { return edge_widths(d); }, drive);
}

cplx retarded_single_site(double eps, double eps0, double width_total) {
  if (!(width_total > 0)) throw std::invalid_argument("single-site width must be > 0");
  return 1.0 / cplx(eps - eps0, width_total);
}

Eigen::MatrixXcd inverse_retarded(const ChainModel& model, EdgeWidths widths, double eps) {
  require(validate(model));
  check_widths(widths);
  const int n = model.n_sites;
  const double nu = model.effective_bulk_rate();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) m(j, j) = cplx(eps - model.onsite[j], nu);
  m(0, 0) += kI * widths.left;
  m(n - 1, n - 1) += kI * widths.right;
  for (int j = 0; j + 1 < n; ++j) {
    m(j, j + 1) = model.hopping;
    m(j + 1, j) = model.hopping;
  }
  return m;
}

Eigen::MatrixXcd retarded_chain_dense(const ChainModel& model, EdgeWidths widths, double eps) {
  const Eigen::MatrixXcd m = inverse_retarded(model, widths, eps);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff())) throw OnShellSingularity(eps);
  return lu.inverse();
}

RootPair chain_roots(cplx eps_tilde) {
  cplx s = std::sqrt(eps_tilde * eps_tilde - 4.0);
  // Pick the branch without cancellation; the small root is the reciprocal.
  if (std::real(std::conj(eps_tilde) * s) < 0.0) s = -s;
  const cplx big = 0.5 * (eps_tilde + s);
  return {big, 1.0 / big};
}

ClosedFormChain::ClosedFormChain(const ClosedFormParams& p) : n_(p.n_sites) {
  if (p.n_sites < 2) throw std::invalid_argument("closed-form chain inverse needs at least two sites");
  if (p.hopping == 0 || !std::isfinite(p.hopping)) throw std::invalid_argument("closed form needs a finite nonzero hopping");
  if (!(p.width >= 0) || !(p.bulk >= 0)) throw std::invalid_argument("width and bulk rate must be >= 0");
  scale_ = std::abs(p.hopping);
  sign_ = p.hopping > 0 ? 1 : -1;
  const cplx a = cplx(p.energy, p.bulk) / scale_;
  const cplx corner = a + kI * (p.width / scale_);

  // B_0 = 1, B_1 = a + i d, B_k = a B_{k-1} - B_{k-2}; carried as ratios.
  log_b_.assign(static_cast<std::size_t>(n_), cplx{});
  cplx ratio = corner;
  for (int k = 1; k < n_; ++k) {
    if (k > 1) ratio = a - 1.0 / ratio;
    log_b_[static_cast<std::size_t>(k)] = log_b_[static_cast<std::size_t>(k - 1)] + std::log(ratio);
  }
  // D = corner B_{N-1} - B_{N-2} = B_{N-1} (corner - B_{N-2}/B_{N-1}).
  log_denominator_ = log_b(n_ - 1) + std::log(corner - 1.0 / ratio);
}

cplx ClosedFormChain::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n_) throw std::out_of_range("site index out of range");
  const double phase = ((i + j) % 2 == 0) ? 1.0 : -static_cast<double>(sign_);
  return phase * std::exp(log_b(i - 1) + log_b(n_ - j) - log_denominator_) / scale_;
}

cplx closed_form_chain_gf(const ClosedFormParams& p, int i, int j) { return ClosedFormChain(p)(i, j); }

cplx b_polynomial_from_roots(int k, cplx eps_tilde, double width) {
  const RootPair r = chain_roots(eps_tilde);
  const cplx id = kI * width;
  return ((r.plus + id) * std::pow(r.plus, k) - (r.minus + id) * std::pow(r.minus, k)) / (r.plus - r.minus);
}

ExplicitTransmission edge_propagator_sq_explicit(double eps, double delta, int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("explicit formula needs at least two sites");
  bool nudged = false;
  if (eps * eps == 4.0) {
    eps += (eps > 0 ? -1e-13 : 1e-13);
    nudged = true;
  }
  const cplx s = std::sqrt(cplx(eps * eps - 4.0, 0.0));
  const cplx rp = 0.5 * (eps + s);
  const cplx rm = 0.5 * (eps - s);
  const cplx pn = std::pow(rp, n_sites);
  const cplx mn = std::pow(rm, n_sites);
  const cplx den = cplx(eps - delta * delta * eps, 4.0 * delta) * (pn - mn) + (delta * delta + 1.0) * s * (pn + mn);
  return {4.0 * std::abs(eps * eps - 4.0) / std::norm(den), nudged};
}

bool closed_form_applicable(const ChainModel& model, EdgeWidths widths) {
  return model.n_sites >= 2 && model.hopping != 0 && model.has_uniform_onsite() && widths.left == widths.right;
}

EdgeRows retarded_edge_rows(const ChainModel& model, EdgeWidths widths, double eps) {
  const int n = model.n_sites;
  EdgeRows rows{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  if (closed_form_applicable(model, widths)) {
    check_widths(widths);
    const ClosedFormChain g({eps - model.onsite.front(), widths.left, model.effective_bulk_rate(), n, model.hopping});
    for (int j = 1; j <= n; ++j) {
      rows.first(j - 1) = g(1, j);
      rows.last(j - 1) = g(j, n);
    }
    return rows;
  }
  const Eigen::MatrixXcd m = inverse_retarded(model, widths, eps);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw OnShellSingularity(eps);
  }
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, 2);
  rhs(0, 0) = 1.0;
  rhs(n - 1, 1) = 1.0;
  const Eigen::MatrixXcd cols = lu.solve(rhs);
  rows.first = cols.col(0);
  rows.last = cols.col(1);
  return rows;
}

Eigen::VectorXcd keldysh_source(const ChainModel& model, const LindbladDrive& drive) {
  require(validate(model));
  const int n = model.n_sites;
  Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
  bias(0) += drive.left.bias();
  bias(n - 1) += drive.right.bias();
  const double bulk = model.bulk_sign() * model.effective_bulk_rate();
  Eigen::VectorXcd src(n);
  for (int j = 0; j < n; ++j) src(j) = -2.0 * kI * (bias(j) - bulk);
  return src;
}

Eigen::MatrixXcd keldysh_from_rak(const Eigen::MatrixXcd& g_r, const LindbladDrive& drive, const ChainModel& model) {
  if (g_r.rows() != model.n_sites || g_r.cols() != model.n_sites) {
    throw std::invalid_argument("retarded matrix does not match the chain size");
  }
  const Eigen::VectorXcd src = keldysh_source(model, drive);
  return -(g_r * src.asDiagonal() * g_r.adjoint());
}

Eigen::MatrixXcd keldysh_from_rak(const Eigen::MatrixXcd& g_r, const Drive& drive, const ChainModel& model) {
  const auto* lindblad = std::get_if<LindbladDrive>(&drive);
  if (lindblad == nullptr) throw std::invalid_argument("Keldysh component is only built for Lindblad drives");
  return keldysh_from_rak(g_r, *lindblad, model);
}

GreenSet green_set(const ChainModel& model, const LindbladDrive& drive, double eps) {
  require(validate(model, Drive{drive}));
  GreenSet set;
  set.energy = eps;
  set.g_r = retarded_chain_dense(model, edge_widths(drive), eps);
  set.g_a = set.g_r.adjoint();
  set.g_k = keldysh_from_rak(set.g_r, drive, model);
  return set;
}

Eigen::MatrixXcd retarded(const ChainModel& model, const Drive& drive, double eps) {
  require(validate(model, drive));
  return retarded_chain_dense(model, edge_widths(drive), eps);
}

}  // namespace lbt::greens
