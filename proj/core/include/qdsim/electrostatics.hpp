#pragma once

#include <array>

#include "qdsim/capacitance.hpp"

namespace qdsim {

/// Two-level parameters extracted from the capacitance network.
/// e_c: charging energy, eta: inter-qubit coupling, eps_a/eps_b: bias
/// energies at the given gate voltages, omega_a/omega_b: tunneling
/// amplitudes (device inputs, not derivable from the capacitances).
struct QubitParams {
  double e_c = 0.0;
  double eta = 0.0;
  double eps_a = 0.0;
  double eps_b = 0.0;
  double omega_a = 0.0;
  double omega_b = 0.0;
};

/// U = sum_i q_i^2 / (2 c_i) - q7*Va - q10*Vb, evaluated as written.
/// A zero capacitor contributes 0 for q_i = 0 and +infinity otherwise.
double raw_energy(const CapacitanceSet& caps, const std::array<double, 10>& q,
                  const GateBias& bias);

struct MinimizeResult {
  double energy = 0.0;
  std::array<double, 10> charges{};
};

/// Minimum of raw_energy over the real charges q1..q10 subject to the four
/// charge constraints of the network,
///   -N_A =  q1 + q3 + q5 + q6
///   -N_B =  q2 + q4 - q6 + q7
///   -N_C = -q1 - q4 + q8 + q9
///   -N_D = -q2 - q3 - q9 + q10
/// solved exactly as a linear KKT system.  Works for any positive
/// capacitance set (symmetry not required); zero cross capacitors are
/// eliminated (their charge is pinned to 0).  This routine is the
/// independent oracle for the closed-form energy.
MinimizeResult minimize_energy(const CapacitanceSet& caps,
                               const ChargeConfig& config,
                               const GateBias& bias);

/// Combination capacitances of the closed-form energy.  Requires a
/// symmetric set.  varrho = 2*sqrt(2) + 1.
struct ClosedFormBlocks {
  double c_A, c_B, c_C, c_D;   // C_A = C3+C5+C6 and friends
  double inv_c_a, inv_c_b;     // 1/C_a, 1/C_b
  double d_ab, d_cd;           // C_A*C_B - (C3+C6)^2, C_C*C_D - (C6-C3)^2
  double v_plus, v_minus;      // V_a + V_b, V_a - V_b
  double varrho;
};

ClosedFormBlocks closed_form_blocks(const CapacitanceSet& caps,
                                    const GateBias& bias);

/// Closed-form electrostatic energy U(n_a, n_b) of the symmetric network,
/// constant terms included; agrees with minimize_energy to solver precision.
double closed_form_energy(const CapacitanceSet& caps, double n_a, double n_b,
                          double n_total, const GateBias& bias);

/// Small-cross-capacitance completed-square approximation,
///   U = E_c [n_a + (eta/2E_c) n_b + m N - k V_a]^2
///     + E_c [n_b + m N - k V_b]^2,
/// m = (C7-C5)/(C5+C7), k = 2 C5 C7/(C5+C7).  Omits n-independent
/// constants; compare against the closed form referenced to (0,0).
double expanded_energy(const CapacitanceSet& caps, double n_a, double n_b,
                       double n_total, const GateBias& bias);

/// E_c, eta, eps_a, eps_b from the capacitances; the tunneling amplitudes
/// are passed through.
QubitParams qubit_parameters(const CapacitanceSet& caps, double n_total,
                             const GateBias& bias, double omega_a,
                             double omega_b);

}  // namespace qdsim
