#include "qdsim/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace qdsim {

TwoQubitHamiltonian build_hamiltonian(const QubitParams& p) {
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  // diagonal: eps_a sz(x)I + eps_b I(x)sz - (eta/4) sz(x)sz
  h(0, 0) = p.eps_a + p.eps_b - p.eta / 4.0;
  h(1, 1) = p.eps_a - p.eps_b + p.eta / 4.0;
  h(2, 2) = -p.eps_a + p.eps_b + p.eta / 4.0;
  h(3, 3) = -p.eps_a - p.eps_b - p.eta / 4.0;
  // Omega_a sx(x)I flips n_a (0<->2, 1<->3)
  h(0, 2) = h(2, 0) = p.omega_a;
  h(1, 3) = h(3, 1) = p.omega_a;
  // Omega_b I(x)sx flips n_b (0<->1, 2<->3)
  h(0, 1) = h(1, 0) = p.omega_b;
  h(2, 3) = h(3, 2) = p.omega_b;
  return TwoQubitHamiltonian{h};
}

Eigensystem eigensystem(const TwoQubitHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensystem: decomposition failed");
  return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

double level_crossing_voltage(const CapacitanceSet& caps, double n_total,
                              int n_b_condition) {
  if (n_b_condition != 0 && n_b_condition != 1)
    throw std::invalid_argument("level_crossing_voltage: condition must be 0 or 1");
  const QubitParams p0 =
      qubit_parameters(caps, n_total, GateBias{0.0, 0.0}, 0.0, 0.0);
  const double c5 = caps.c(5), c7 = caps.c(7);
  const double lever = 2.0 * c5 * c7 / (c5 + c7);  // -d eps_a / d V_a = E_c * lever
  const double sz_b = 1.0 - 2.0 * n_b_condition;
  // eps_a(V) = eps_a(0) - e_c*lever*V; solve eps_a(V) = (eta/4) sz_b
  return (p0.eps_a - 0.25 * p0.eta * sz_b) / (p0.e_c * lever);
}

}  // namespace qdsim
