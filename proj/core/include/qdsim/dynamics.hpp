#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qdsim/capacitance.hpp"
#include "qdsim/electrostatics.hpp"
#include "qdsim/hamiltonian.hpp"

namespace qdsim {

using StateVector = Eigen::Vector4cd;    ///< |psi> in the |n_a n_b> basis
using DensityMatrix = Eigen::Matrix4cd;  ///< 4x4 density operator

/// Tunneling amplitudes, constant over a pulse schedule.
struct Tunneling {
  double omega_a = 0.0;
  double omega_b = 0.0;
};

/// One piecewise-constant bias segment.  Within a segment the Hamiltonian is
/// fixed, so the propagator is an exact matrix exponential.
struct PulseSegment {
  GateBias bias;
  double duration = 0.0;  ///< natural time units (hbar = 1)
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;

  double total_duration() const;
  void validate() const;  // throws on empty schedule / non-positive durations
};

/// Sampled observables along an evolution.
struct ChargeTrace {
  std::vector<double> t;
  std::vector<double> sz_a, sz_b;            // <sigma_z> per qubit
  std::vector<double> p00, p01, p10, p11;    // basis populations
  std::vector<double> norm;                  // <psi|psi> or tr(rho)

  std::size_t size() const { return t.size(); }
};

struct UnitaryEvolution {
  ChargeTrace trace;
  StateVector final_state;
};

/// Schroedinger evolution under the schedule.  The Hamiltonian is rebuilt
/// from qubit_parameters at each segment's bias; propagation is by
/// per-segment eigendecomposition (exact for piecewise-constant H), and the
/// sampling grid is observation-only: it never influences the final state.
UnitaryEvolution evolve_unitary(const CapacitanceSet& caps, double n_total,
                                const Tunneling& tunneling,
                                const PulseSchedule& schedule,
                                const StateVector& psi0, double sample_dt);

struct BlochEvolution {
  ChargeTrace trace;
  DensityMatrix final_rho;
};

/// Dissipative evolution: unitary part as in evolve_unitary plus per-qubit
/// longitudinal (1/t1) and transverse (1/t2) relaxation toward the
/// maximally mixed state, in Lindblad form in each qubit's sigma basis.
/// Requires t1, t2 > 0 and t2 <= 2*t1 (infinite values switch the channel
/// off).  Trace is preserved and the map is completely positive.
BlochEvolution evolve_bloch(const CapacitanceSet& caps, double n_total,
                            const Tunneling& tunneling,
                            const PulseSchedule& schedule,
                            const DensityMatrix& rho0, double t1, double t2,
                            double sample_dt);

enum class Qubit { a, b };

struct PeriodEstimate {
  bool oscillating = false;
  double period = 0.0;           ///< from zero crossings of the mean-free signal
  double period_spectral = 0.0;  ///< discrete-spectrum peak cross-check
  std::size_t crossings = 0;
};

/// Dominant oscillation period of <sigma_z> for one qubit.  Zero-crossing
/// analysis of the mean-subtracted signal; a spectral peak is reported as a
/// cross-check.  A constant trace yields oscillating = false.
PeriodEstimate oscillation_period(const ChargeTrace& trace, Qubit which);

/// Conditional-resonance NOT pulse plan: park, resonant pi pulse on qubit a
/// at the crossing voltage conditioned on n_b = control_state, park.
struct CnotPlan {
  PulseSchedule schedule;
  double t_pi = 0.0;        ///< resonant segment duration, pi/(2 Omega_a)
  double resonant_va = 0.0;
  GateBias park;
  std::vector<std::string> warnings;
};

/// Requires eta > 0 (throws ValidityError otherwise) and omega_a > 0.
/// Warns when omega_a is not small against eta or the park bias sits close
/// to a conditional resonance.
CnotPlan cnot_schedule(const CapacitanceSet& caps, double n_total,
                       double omega_a, int control_state);

/// Populations of the four basis states after applying `schedule` to each
/// basis state in turn; row = input state, column = output state.
/// The control qubit's tunneling is frozen (omega_b = 0).
Eigen::Matrix4d truth_table_for_schedule(const CapacitanceSet& caps,
                                         double n_total,
                                         const Tunneling& tunneling,
                                         const PulseSchedule& schedule);

/// Truth table of the generated conditional-NOT schedule.
Eigen::Matrix4d truth_table(const CapacitanceSet& caps, double n_total,
                            double omega_a, int control_state = 1);

/// Expected truth table of an ideal NOT on qubit a conditioned on qubit b
/// being in charge state `control_state`.
Eigen::Matrix4d cnot_permutation(int control_state = 1);

}  // namespace qdsim
