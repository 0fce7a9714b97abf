#pragma once

#include <array>

namespace qdsim {

/// Dot/electrode geometry used for the parallel-plate-with-spreading
/// capacitance estimate.
struct DotGeometry {
  double radius_nm = 0.0;  ///< dot radius r
  double gap_nm = 0.0;     ///< capacitor gap d_i
  double eps_ox = 4.0;     ///< relative permittivity of the oxide
  double eps_si = 12.0;    ///< relative permittivity of silicon

  void validate() const;  // throws std::invalid_argument
};

/// C = 2*pi*eps_ox*r^2 / (d + (eps_ox/eps_si)*r), returned in aF
/// (eps_ox enters as eps_ox * eps0 with eps0 in aF/nm).
double estimate_capacitance(const DotGeometry& geom);

/// The ten capacitances of the two-qubit network, in aF.
///
/// Index map (two charge qubits, dots A,B and C,D):
///   c1 A-C, c2 B-D   diagonal cross capacitors
///   c3 A-D, c4 B-C   straight cross capacitors
///   c5 A-ground, c6 A-B junction, c7 B-gate (V_a)
///   c8 C-ground, c9 C-D junction, c10 D-gate (V_b)
///
/// The symmetric network obeys c1 = c2 = sqrt(2)*c3 = sqrt(2)*c4,
/// c8 = c5, c9 = c6, c10 = c7.
class CapacitanceSet {
 public:
  /// Build the symmetric network from the four independent values.
  static CapacitanceSet symmetric(double c3, double c5, double c6, double c7);

  /// Build from all ten values (c[0] = c1 ... c[9] = c10).
  static CapacitanceSet from_values(const std::array<double, 10>& c);

  /// 1-based accessor, i in [1, 10].
  double c(int i) const;

  const std::array<double, 10>& values() const { return c_; }

  /// True when the symmetry constraints hold to the given relative tolerance.
  bool is_symmetric(double rel_tol = 1e-12) const;

 private:
  CapacitanceSet() = default;
  void validate() const;  // c5..c10 > 0; cross caps c1..c4 >= 0

  std::array<double, 10> c_{};
};

struct WeakCouplingCheck {
  double ratio = 0.0;  ///< max(c1..c4) / min(c5..c7)
  bool weak = false;   ///< ratio below threshold
};

/// Cross-coupling hierarchy check: the two-level reduction assumes the cross
/// capacitors are much smaller than the intra-qubit ones.
WeakCouplingCheck check_weak_coupling(const CapacitanceSet& caps,
                                      double threshold = 0.1);

/// Gate voltages applied to the two qubit gates, natural units (e/aF).
struct GateBias {
  double va = 0.0;
  double vb = 0.0;
};

/// Dot occupations in reduced coordinates n_a = N_A - N_B, n_b = N_C - N_D,
/// N = N_A + N_B = N_C + N_D.  Physical states have integer occupations; the
/// electrostatics is well defined for real values, which the energy
/// cross-checks use freely.
struct ChargeConfig {
  double n_a = 0.0;
  double n_b = 0.0;
  double n_total = 0.0;

  /// From integer occupations; requires nA + nB == nC + nD.
  static ChargeConfig from_occupations(int n_A, int n_B, int n_C, int n_D);
  static ChargeConfig reduced(double n_a, double n_b, double n_total);

  double occupation_a() const { return 0.5 * (n_total + n_a); }
  double occupation_b() const { return 0.5 * (n_total - n_a); }
  double occupation_c() const { return 0.5 * (n_total + n_b); }
  double occupation_d() const { return 0.5 * (n_total - n_b); }
};

}  // namespace qdsim
