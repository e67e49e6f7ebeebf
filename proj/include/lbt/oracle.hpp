#pragma once

// Brute-force steady state of the full master equation on small chains.
// Fermions are encoded with Jordan-Wigner strings on a 2^N Fock space whose
// basis index carries the occupation of site j in bit j; density matrices
// are column-stacked, vec(A rho B) = (B^T kron A) vec(rho).

#include <vector>

#include <Eigen/Dense>

#include "lbt/model.hpp"
#include "lbt/transport.hpp"

namespace lbt::oracle {

inline constexpr int kMaxSites = 4;

/// Annihilation operators c_0 ... c_{N-1} as dense 2^N x 2^N matrices.
std::vector<Eigen::MatrixXcd> annihilators(int n_sites);

/// H = sum_j eps_j n_j + J sum_j (c_j^+ c_{j+1} + h.c.).
Eigen::MatrixXcd hamiltonian(const ChainModel& model, const std::vector<Eigen::MatrixXcd>& c);

struct Superoperator {
  int dim = 0;  // 2^N
  Eigen::MatrixXcd matrix;
  ChainModel model;
  LindbladDrive drive;
};

/// Generator rho -> -i[H, rho] + sum_k (L_k rho L_k^+ - {L_k^+ L_k, rho}/2) with
/// jump operators sqrt(2 alpha) c^+ and sqrt(2 beta) c at the edges and
/// sqrt(2 nu) c_j (loss) or sqrt(2 nu) c_j^+ (gain) on every site.
Superoperator build_liouvillian(const ChainModel& model, const LindbladDrive& drive);

Eigen::MatrixXcd apply(const Superoperator& sop, const Eigen::MatrixXcd& rho);

struct SteadyState {
  Eigen::MatrixXcd rho;
  std::vector<double> occupations;
  transport::CurrentResult currents;
  /// |J_D(bulk) - (J_L - J_R)|; zero at exact stationarity.
  double conservation_defect = 0.0;
  /// Frobenius norm of the generator applied to rho.
  double residual = 0.0;
};

class DegenerateSteadyState : public std::runtime_error {
 public:
  DegenerateSteadyState(const std::string& what, std::vector<Eigen::MatrixXcd> basis);
  const std::vector<Eigen::MatrixXcd>& basis() const { return basis_; }

 private:
  std::vector<Eigen::MatrixXcd> basis_;
};

SteadyState steady_state(const Superoperator& sop);

/// Convenience: build the generator and solve.
SteadyState solve(const ChainModel& model, const LindbladDrive& drive);

}  // namespace lbt::oracle
