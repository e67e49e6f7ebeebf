#pragma once

// Currents, occupations and conductances of driven chains.
//
// Sign conventions: J_L is the current leaving the left reservoir, J_R the
// current entering the right one. J = (J_L + J_R)/2 flows through the chain
// and J_D = J_L - J_R is the net rate at which the bulk removes particles
// (positive for loss, negative for gain).

#include "lbt/greens.hpp"
#include "lbt/model.hpp"
#include "lbt/quadrature.hpp"

namespace lbt::transport {

struct CurrentResult {
  double j_left = 0.0;
  double j_right = 0.0;
  double j_through = 0.0;
  double j_dissipative = 0.0;

  static CurrentResult from_edges(double j_left, double j_right);
  static CurrentResult from_through(double j_through, double j_dissipative);
};

/// gamma_r (2 on the edge site r) and Gamma_r = Delta_r gamma_r, stored as
/// diagonals.
struct CouplingMatrices {
  Eigen::VectorXd gamma_l;
  Eigen::VectorXd gamma_r;
  Eigen::VectorXd big_gamma_l;
  Eigen::VectorXd big_gamma_r;

  static CouplingMatrices build(int n_sites, greens::EdgeWidths widths);
};

/// Fermi-Dirac distribution; at T = 0 a step with f(mu) = 1/2.
double fermi(double eps, const FermionicReservoir& res);
/// -df/de; at T = 0 this is a delta function and the call throws.
double fermi_derivative(double eps, const FermionicReservoir& res);

/// High mu, T identification alpha = Delta(1 + tanh(mu/2T))/2,
/// beta = Delta(1 - tanh(mu/2T))/2. At T = 0 the step limit is returned.
LindbladReservoir map_fermionic_to_lindblad(const FermionicReservoir& res);

/// Stationary occupation of a site coupled to one Lindblad reservoir.
double occupation_lindblad(const LindbladReservoir& res);

/// Stationary occupation of a level eps0 coupled to one fermionic bath.
double occupation_fermionic(const FermionicReservoir& res, double eps0, const QuadratureSpec& quad = {});

/// Generic Keldysh current for Lindblad drives; valid with bulk loss/gain.
CurrentResult current_lindblad_generic(const ChainModel& model, const LindbladDrive& drive,
                                       const QuadratureSpec& quad = {});

/// Meir-Wingreen current for fermionic baths (non-dissipative chains).
double current_meir_wingreen(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& quad = {});

/// Landauer-Buttiker current int (f_L - f_R) 4 Delta_L Delta_R |G^R_{1N}|^2.
double current_free_fermionic(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& quad = {});

/// Lindblad counterpart int (alpha_L beta_R - beta_L alpha_R) 4 |G^R_{1N}|^2.
double current_free_lindblad(const ChainModel& model, const LindbladDrive& drive, const QuadratureSpec& quad = {});

struct DissipativeChainResult {
  CurrentResult current;
  /// Set when the symmetric closed form did not apply and the generic
  /// Keldysh formula was evaluated instead.
  bool generic_path = false;
};

/// Closed-form currents of a uniform chain with bulk loss/gain for a
/// symmetric drive (equal widths Delta, biases +-dmu).
DissipativeChainResult current_dissipative_chain(const ChainModel& model, const LindbladDrive& drive,
                                                 const QuadratureSpec& quad = {});

/// High-temperature linear conductance g = (1/4T) int Tr[Gamma_R G^R Gamma_L G^A].
double conductance_high_t(const ChainModel& model, double delta, double temperature, const QuadratureSpec& quad = {});

/// Transmission probability 4 Delta_L Delta_R |G^R_{1N}(eps)|^2.
double transmission(const ChainModel& model, greens::EdgeWidths widths, double eps);

/// Linear conductance int (-df/de) 4 Delta_L Delta_R |G^R_{1N}|^2 de/2pi for
/// equal chemical potentials; at T = 0 the integral collapses to
/// transmission(mu) / 2pi.
double conductance_finite_t(const ChainModel& model, const FermionicDrive& drive, const QuadratureSpec& quad = {});

/// Bounding integral J_a = int_{-pi/2}^{pi/2} dtheta/pi [f_L - f_R](2 sin theta) cos^a theta.
double bounding_current(int power, const FermionicDrive& drive, const QuadratureSpec& quad = {});

/// Closed chain eigenvalues, used as quadrature breakpoints.
std::vector<double> chain_levels(const ChainModel& model);

}  // namespace lbt::transport
