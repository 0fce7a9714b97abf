#pragma once

#include <Eigen/Dense>

#include "qdsim/capacitance.hpp"
#include "qdsim/electrostatics.hpp"

namespace qdsim {

// Basis and sign convention, used everywhere in the library:
// product basis |n_a n_b> ordered {|00>, |01>, |10>, |11>}, index 2*n_a+n_b;
// the charge state n = 0 is the sigma_z = +1 eigenstate, n = 1 is -1, so
// sigma_z = 1 - 2n on each qubit.  Qubit a is the left (most significant)
// tensor factor.

/// H = sum_j (eps_j sigma_zj + Omega_j sigma_xj) - (eta/4) sigma_za sigma_zb.
/// Real symmetric for real Omega; the cross term makes qubit a's effective
/// bias depend on the state of qubit b, eps_a_eff = eps_a - (eta/4) sigma_zb,
/// which is what the conditional gate exploits.
struct TwoQubitHamiltonian {
  Eigen::Matrix4cd matrix;
};

TwoQubitHamiltonian build_hamiltonian(const QubitParams& p);

struct Eigensystem {
  Eigen::Vector4d values;    ///< ascending
  Eigen::Matrix4cd vectors;  ///< orthonormal columns, vectors.col(k) <-> values(k)
};

Eigensystem eigensystem(const TwoQubitHamiltonian& h);

/// Gate voltage V_a* at which qubit a's effective bias vanishes when qubit b
/// is held in charge state n_b_condition (0 or 1):
///   eps_a(V_a*) = (eta/4) * (1 - 2 n_b_condition).
/// With eta = 0 both conditions give the same voltage (no conditional shift).
double level_crossing_voltage(const CapacitanceSet& caps, double n_total,
                              int n_b_condition);

}  // namespace qdsim
