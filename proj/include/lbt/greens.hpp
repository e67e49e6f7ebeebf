#pragma once

// Retarded, advanced and Keldysh Green functions of a driven tight-binding
// chain. The inverse retarded matrix is tridiagonal:
//
//   [G^R]^{-1}_{jj}   = eps - eps_j + i nu (+ i Delta_L at site 1, + i Delta_R at site N)
//   [G^R]^{-1}_{j,j+1} = [G^R]^{-1}_{j+1,j} = +J
//
// The +J off-diagonal is the gauge in which the closed-form inverse below
// holds verbatim; observables only depend on |J|.

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "lbt/model.hpp"

namespace lbt::greens {

using cplx = std::complex<double>;

/// Hybridization widths attached to the first and last site.
struct EdgeWidths {
  double left = 0.0;
  double right = 0.0;
};

EdgeWidths edge_widths(const LindbladDrive& drive);
EdgeWidths edge_widths(const FermionicDrive& drive);
EdgeWidths edge_widths(const Drive& drive);

/// Raised when eps hits an eigenvalue of a chain with no broadening at all.
class OnShellSingularity : public std::domain_error {
 public:
  explicit OnShellSingularity(double energy);
  double energy() const { return energy_; }

 private:
  double energy_;
};

struct GreenSet {
  double energy = 0.0;
  Eigen::MatrixXcd g_r;
  Eigen::MatrixXcd g_a;
  Eigen::MatrixXcd g_k;
};

/// 1 / (eps - eps0 + i width_total); the advanced function is its conjugate.
cplx retarded_single_site(double eps, double eps0, double width_total);

/// The tridiagonal matrix [G^R(eps)]^{-1}.
Eigen::MatrixXcd inverse_retarded(const ChainModel& model, EdgeWidths widths, double eps);

/// G^R(eps) by partially pivoted LU inversion of `inverse_retarded`.
Eigen::MatrixXcd retarded_chain_dense(const ChainModel& model, EdgeWidths widths, double eps);

/// Roots of r^2 - eps_tilde r + 1 = 0, ordered so |minus| <= 1 <= |plus|.
struct RootPair {
  cplx plus;
  cplx minus;
};
RootPair chain_roots(cplx eps_tilde);

/// Inputs of the closed-form inverse for a uniform chain with equal edge
/// widths. Energies are in absolute units; `hopping` sets the scale.
struct ClosedFormParams {
  double energy = 0.0;
  double width = 0.0;
  double bulk = 0.0;
  int n_sites = 2;
  double hopping = 1.0;
};

/// Closed-form inverse of the uniform tridiagonal matrix. Builds the
/// B_k polynomials once (as ratios B_k / B_{k-1} and accumulated logs, so
/// nothing overflows for long chains or large nu) and then answers any
/// element in O(1).
class ClosedFormChain {
 public:
  explicit ClosedFormChain(const ClosedFormParams& p);

  /// G^R_{i,j}, 1-based, any order (G^R is symmetric).
  cplx operator()(int i, int j) const;
  int n_sites() const { return n_; }

 private:
  cplx log_b(int k) const { return log_b_[static_cast<std::size_t>(k)]; }

  int n_;
  double scale_;  // |J|
  int sign_;      // sign of J
  cplx log_denominator_;
  std::vector<cplx> log_b_;
};

/// Single-element convenience wrapper around ClosedFormChain.
cplx closed_form_chain_gf(const ClosedFormParams& p, int i, int j);

/// B_k from its root representation; used to cross-check the recursion.
cplx b_polynomial_from_roots(int k, cplx eps_tilde, double width);

/// |G^R_{1,N}|^2 from the explicit root formula (nu = 0, |J| = 1). Exactly at
/// the band edges eps = +-2 the formula is 0/0; the energy is then nudged by
/// 1e-13 and `nudged` is set.
struct ExplicitTransmission {
  double value;
  bool nudged;
};
ExplicitTransmission edge_propagator_sq_explicit(double eps, double delta, int n_sites);

/// True when the closed form applies: N >= 2, uniform onsite, equal widths.
bool closed_form_applicable(const ChainModel& model, EdgeWidths widths);

/// First and last rows of G^R(eps) (equal to the first and last columns).
struct EdgeRows {
  Eigen::VectorXcd first;
  Eigen::VectorXcd last;
};
EdgeRows retarded_edge_rows(const ChainModel& model, EdgeWidths widths, double eps);

/// Diagonal source matrix [G^K]^{-1} for a Lindblad drive, as a vector:
/// -2i((alpha - beta)_site - s nu), s = +1 loss, -1 gain.
Eigen::VectorXcd keldysh_source(const ChainModel& model, const LindbladDrive& drive);

/// G^K = -G^R [G^K]^{-1} G^A.
Eigen::MatrixXcd keldysh_from_rak(const Eigen::MatrixXcd& g_r, const LindbladDrive& drive, const ChainModel& model);
/// Same, for a type-erased drive; fermionic drives are rejected.
Eigen::MatrixXcd keldysh_from_rak(const Eigen::MatrixXcd& g_r, const Drive& drive, const ChainModel& model);

/// Full (G^R, G^A, G^K) at one energy for a Lindblad-driven chain.
GreenSet green_set(const ChainModel& model, const LindbladDrive& drive, double eps);

/// Retarded function for any drive (no Keldysh component is built).
Eigen::MatrixXcd retarded(const ChainModel& model, const Drive& drive, double eps);

}  // namespace lbt::greens
