#include "lbt/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace lbt::oracle {

namespace {

using cplx = std::complex<double>;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int dim) { return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim); }

void add_dissipator(Eigen::MatrixXcd& sop, const Eigen::MatrixXcd& jump, double rate) {
  if (rate == 0.0) return;
  const Eigen::MatrixXcd l = std::sqrt(rate) * jump;
  const Eigen::MatrixXcd ldl = l.adjoint() * l;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(l.rows(), l.cols());
  sop += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
}

// Orthonormal basis of Hermitian matrices (E_ii, (E_ij + E_ji)/sqrt2,
// i(E_ij - E_ji)/sqrt2) as columns of a unitary D^2 x D^2 matrix. The
// generator preserves Hermiticity, so it is real in this basis.
Eigen::MatrixXcd hermitian_basis(int dim) {
  const int d2 = dim * dim;
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(d2, d2);
  const double r = std::sqrt(0.5);
  int col = 0;
  for (int i = 0; i < dim; ++i) {
    basis(i + i * dim, col++) = 1.0;
    for (int j = i + 1; j < dim; ++j) {
      basis(i + j * dim, col) = r;
      basis(j + i * dim, col++) = r;
      basis(i + j * dim, col) = cplx(0.0, r);
      basis(j + i * dim, col++) = cplx(0.0, -r);
    }
  }
  return basis;
}

}  // namespace

std::vector<Eigen::MatrixXcd> annihilators(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw std::invalid_argument("oracle supports 1 to " + std::to_string(kMaxSites) + " sites, got " +
                                std::to_string(n_sites));
  }
  const int dim = 1 << n_sites;
  std::vector<Eigen::MatrixXcd> c;
  for (int j = 0; j < n_sites; ++j) {
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
    for (int state = 0; state < dim; ++state) {
      if (!(state >> j & 1)) continue;
      // Jordan-Wigner string: parity of the occupied sites to the left.
      const int below = std::popcount(static_cast<unsigned>(state & ((1 << j) - 1)));
      op(state ^ (1 << j), state) = (below % 2 == 0) ? 1.0 : -1.0;
    }
    c.push_back(std::move(op));
  }
  return c;
}

Eigen::MatrixXcd hamiltonian(const ChainModel& model, const std::vector<Eigen::MatrixXcd>& c) {
  const int dim = static_cast<int>(c.front().rows());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < model.n_sites; ++j) h += model.onsite[j] * c[j].adjoint() * c[j];
  for (int j = 0; j + 1 < model.n_sites; ++j) {
    const Eigen::MatrixXcd hop = c[j].adjoint() * c[j + 1];
    h += model.hopping * (hop + hop.adjoint());
  }
  return h;
}

Superoperator build_liouvillian(const ChainModel& model, const LindbladDrive& drive) {
  require(validate(model, Drive{drive}));
  const auto c = annihilators(model.n_sites);
  const int dim = 1 << model.n_sites;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd h = hamiltonian(model, c);

  Superoperator sop{dim, Eigen::MatrixXcd(), model, drive};
  sop.matrix = cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));

  const int last = model.n_sites - 1;
  add_dissipator(sop.matrix, c[0].adjoint(), 2.0 * drive.left.alpha);
  add_dissipator(sop.matrix, c[0], 2.0 * drive.left.beta);
  add_dissipator(sop.matrix, c[last].adjoint(), 2.0 * drive.right.alpha);
  add_dissipator(sop.matrix, c[last], 2.0 * drive.right.beta);

  const double nu = model.effective_bulk_rate();
  for (int j = 0; j < model.n_sites && nu > 0; ++j) {
    add_dissipator(sop.matrix, model.bulk_kind == BulkKind::Loss ? c[j] : Eigen::MatrixXcd(c[j].adjoint()), 2.0 * nu);
  }
  return sop;
}

Eigen::MatrixXcd apply(const Superoperator& sop, const Eigen::MatrixXcd& rho) {
  return unvec(sop.matrix * vec(rho), sop.dim);
}

DegenerateSteadyState::DegenerateSteadyState(const std::string& what, std::vector<Eigen::MatrixXcd> basis)
    : std::runtime_error(what), basis_(std::move(basis)) {}

SteadyState steady_state(const Superoperator& sop) {
  const Eigen::MatrixXcd basis = hermitian_basis(sop.dim);
  const Eigen::MatrixXd real_sop = (basis.adjoint() * sop.matrix * basis).real();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(real_sop, true);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition of the Liouvillian failed");
  const Eigen::VectorXcd ev = solver.eigenvalues();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) < std::abs(ev(b)); });

  const double scale = std::max(1.0, real_sop.cwiseAbs().maxCoeff());
  const double zero_tol = 1e-9 * scale;
  std::vector<Eigen::MatrixXcd> kernel;
  for (auto k : order) {
    if (std::abs(ev(k)) > zero_tol) break;
    kernel.push_back(unvec(basis * solver.eigenvectors().col(k), sop.dim));
  }
  if (kernel.empty()) throw std::runtime_error("Liouvillian has no zero eigenvalue");
  if (kernel.size() > 1) {
    std::ostringstream msg;
    msg << "steady state is not unique: null space of dimension " << kernel.size() << " (eigenvalues";
    for (std::size_t k = 0; k < kernel.size(); ++k) msg << ' ' << ev(order[k]);
    msg << ")";
    throw DegenerateSteadyState(msg.str(), std::move(kernel));
  }

  SteadyState ss;
  // The eigenvector phase is arbitrary; after fixing it through the trace
  // the Hermitian part is the physical state.
  Eigen::MatrixXcd rho = kernel.front() / kernel.front().trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  ss.rho = rho;
  ss.residual = oracle::apply(sop, rho).norm();

  const auto c = annihilators(sop.model.n_sites);
  for (const auto& op : c) ss.occupations.push_back((rho * op.adjoint() * op).trace().real());

  const auto& d = sop.drive;
  const double n_first = ss.occupations.front();
  const double n_last = ss.occupations.back();
  const double j_left = 2.0 * d.left.alpha * (1.0 - n_first) - 2.0 * d.left.beta * n_first;
  const double j_right = -(2.0 * d.right.alpha * (1.0 - n_last) - 2.0 * d.right.beta * n_last);
  ss.currents = transport::CurrentResult::from_edges(j_left, j_right);

  const double nu = sop.model.effective_bulk_rate();
  double bulk = 0.0;
  for (double n : ss.occupations) bulk += (sop.model.bulk_kind == BulkKind::Loss) ? 2.0 * nu * n : -2.0 * nu * (1.0 - n);
  ss.conservation_defect = std::abs(bulk - ss.currents.j_dissipative);
  return ss;
}

SteadyState solve(const ChainModel& model, const LindbladDrive& drive) {
  return steady_state(build_liouvillian(model, drive));
}

}  // namespace lbt::oracle
