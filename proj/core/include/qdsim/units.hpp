#pragma once

// Internal natural units used throughout the library:
//   charge      e = 1
//   action      hbar = 1
//   capacitance 1 aF
// which fixes the energy unit to e^2/aF, the voltage unit to e/aF and the
// time unit to hbar/(e^2/aF).  The constants below are the documented
// conversions to SI / lab units.

namespace qdsim::units {

inline constexpr double elementary_charge_coulomb = 1.602176634e-19;
inline constexpr double hbar_joule_second = 1.054571817e-34;

// vacuum permittivity in aF/nm (8.8541878128e-12 F/m)
inline constexpr double eps0_af_per_nm = 8.8541878128e-3;

// one energy unit e^2/aF expressed in joule / meV
inline constexpr double energy_unit_joule =
    elementary_charge_coulomb * elementary_charge_coulomb / 1e-18;
inline constexpr double energy_unit_mev = elementary_charge_coulomb / 1e-18 * 1e3;

// one voltage unit e/aF in volt
inline constexpr double voltage_unit_volt = elementary_charge_coulomb / 1e-18;

// one natural time unit hbar/(e^2/aF) in seconds
inline constexpr double time_unit_second = hbar_joule_second / energy_unit_joule;

inline constexpr double seconds_to_natural(double t_seconds) {
  return t_seconds / time_unit_second;
}
inline constexpr double natural_to_seconds(double t_natural) {
  return t_natural * time_unit_second;
}

}  // namespace qdsim::units
