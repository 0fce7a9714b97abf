#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdsim {

/// Long-channel segment parameters.  All segments share the same length
/// (L1 = L2 = ... = LN).  Natural/model units throughout; current comes out
/// in units of beta0 * V^2.
struct ChannelParams {
  double width = 1.0;            ///< Z
  double mobility = 1.0;         ///< mu0
  double c_ox = 1.0;             ///< oxide capacitance per unit area
  double segment_length = 1.0;   ///< L_i
  double phi_b = 0.25;           ///< bulk potential
  double q_depletion = 0.0;      ///< depletion charge per unit area
  double v_flat_band = 0.0;      ///< V_FB

  double beta0() const { return width * mobility * c_ox / segment_length; }
  double alpha() const { return 1.0 + q_depletion / (4.0 * phi_b * c_ox); }
  double v_th() const { return v_flat_band + 2.0 * phi_b + q_depletion / c_ox; }

  void validate() const;  // throws std::invalid_argument

  /// Canonical parameter set realizing the given beta0 and alpha >= 1 with
  /// v_th = 0 (gate voltage equals overdrive); convenient for studies that
  /// work with effective overdrives directly.
  static ChannelParams from_beta_alpha(double beta0, double alpha);
};

/// I = beta0 * (v_g_eff*(v_hi - v_lo) - (alpha/2)*(v_hi^2 - v_lo^2)).
/// v_g_eff is the segment's gate overdrive V_G - V_th^(i).  With
/// linear_model the quadratic alpha term is dropped.  Valid for node
/// voltages below pinch-off (v <= v_g_eff/alpha).
double segment_current(const ChannelParams& p, double v_g_eff, double v_lo,
                       double v_hi, bool linear_model = false);

/// Per-segment threshold shifts induced by the qubit charge states.
/// By convention a charged qubit raises its segment's threshold
/// (shifts >= 0).
struct QubitThresholdMap {
  std::vector<double> dv_th;

  void validate() const;
};

struct SolveOptions {
  bool linear_model = false;
  int max_iterations = 100;
  double rel_tolerance = 1e-12;   ///< on the current-continuity residual
  int max_damping_halves = 8;
  std::ostream* diagnostics = nullptr;  ///< per-iteration log when set
};

struct ChannelSolution {
  std::vector<double> node_voltages;  ///< V_0 = 0 .. V_N = V_DS
  double current = 0.0;               ///< common I_D
  int iterations = 0;
  double residual = 0.0;              ///< max |I^(i+1) - I^(i)| / |I_D|
  std::vector<std::string> warnings;
};

/// Series solve: find the interior node voltages making all segment
/// currents equal (damped Newton on the current-mismatch residuals,
/// initial guess the linear voltage ladder).  `v_g_eff` holds the per
/// segment overdrives.  Throws SolverError on non-convergence and
/// ValidityError on pinch-off or disordered nodes.
ChannelSolution solve_series(const ChannelParams& p,
                             const std::vector<double>& v_g_eff, double v_ds,
                             const SolveOptions& opts = {});

/// Same, with overdrives derived from a common gate voltage and the
/// threshold map: v_g_eff_i = v_gate - v_th - dv_th_i.
ChannelSolution solve_series(const ChannelParams& p, double v_gate,
                             const QubitThresholdMap& thresholds, double v_ds,
                             const SolveOptions& opts = {});

/// Two-segment closed form
///   I_D = beta0/(V_G1+V_G2) * (V_G1 V_G2 V_D - (alpha V_G1/2) V_D^2),
/// where V_G1, V_G2 are the segment overdrives; valid for V_G >> V_D.
double two_qubit_current(const ChannelParams& p, double v_g1, double v_g2,
                         double v_d);

struct DeltaCurrent {
  double formula = 0.0;        ///< alpha beta0 dv_th V_D^2 / (2 (2 v_g - dv_th))
  double solver = 0.0;         ///< I(shift on segment 1) - I(shift on segment 2)
  double current_shift_1 = 0.0;
  double current_shift_2 = 0.0;
};

/// Qubit-position current contrast: the closed-form estimate together with
/// the two-solve companion diagnostic.  v_g is the unshifted overdrive and
/// 0 < dv_th < v_g the threshold shift of the charged qubit.
DeltaCurrent delta_current_two_qubit(const ChannelParams& p, double v_g,
                                     double dv_th, double v_d,
                                     const SolveOptions& opts = {});

/// Readout operating point: common gate voltage, drain bias, and the
/// per-charge-state threshold shifts of each qubit ({n=0, n=1}).
struct ReadoutSetup {
  double v_gate = 0.0;
  double v_ds = 0.0;
  std::array<double, 2> dvth_a{0.0, 0.0};
  std::array<double, 2> dvth_b{0.0, 0.0};
};

struct ReadoutMap {
  std::array<double, 4> state_currents{};  ///< I_D for |00>, |01>, |10>, |11>
  double mean_current = 0.0;               ///< population-weighted average
};

/// Channel current for each two-qubit basis state (qubit a gates segment 1,
/// qubit b segment 2) and the population-weighted mean.  Populations must
/// sum to 1 within 1e-9.
ReadoutMap readout_map(const ChannelParams& p, const ReadoutSetup& setup,
                       const std::array<double, 4>& populations,
                       const SolveOptions& opts = {});

}  // namespace qdsim
