#include "qdsim/capacitance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qdsim/units.hpp"

namespace qdsim {

void DotGeometry::validate() const {
  if (!(radius_nm > 0.0) || !std::isfinite(radius_nm))
    throw std::invalid_argument("DotGeometry: radius must be > 0");
  if (!(gap_nm > 0.0) || !std::isfinite(gap_nm))
    throw std::invalid_argument("DotGeometry: gap must be > 0");
  if (!(eps_ox > 0.0) || !(eps_si > 0.0))
    throw std::invalid_argument("DotGeometry: permittivities must be > 0");
}

double estimate_capacitance(const DotGeometry& geom) {
  geom.validate();
  const double r = geom.radius_nm;
  const double d = geom.gap_nm;
  const double num = 2.0 * M_PI * geom.eps_ox * units::eps0_af_per_nm * r * r;
  return num / (d + (geom.eps_ox / geom.eps_si) * r);
}

CapacitanceSet CapacitanceSet::symmetric(double c3, double c5, double c6,
                                         double c7) {
  const double sq2 = std::sqrt(2.0);
  CapacitanceSet s;
  s.c_ = {sq2 * c3, sq2 * c3, c3, c3, c5, c6, c7, c5, c6, c7};
  s.validate();
  return s;
}

CapacitanceSet CapacitanceSet::from_values(const std::array<double, 10>& c) {
  CapacitanceSet s;
  s.c_ = c;
  s.validate();
  return s;
}

double CapacitanceSet::c(int i) const {
  if (i < 1 || i > 10) throw std::out_of_range("capacitor index must be 1..10");
  return c_[static_cast<std::size_t>(i - 1)];
}

void CapacitanceSet::validate() const {
  for (int i = 0; i < 10; ++i) {
    if (!std::isfinite(c_[i]))
      throw std::invalid_argument("CapacitanceSet: c" + std::to_string(i + 1) +
                                  " is not finite");
    // cross capacitors may vanish (decoupled limit); the intra-qubit
    // junction/ground/gate capacitors must be strictly positive
    const bool ok = (i < 4) ? (c_[i] >= 0.0) : (c_[i] > 0.0);
    if (!ok)
      throw std::invalid_argument("CapacitanceSet: c" + std::to_string(i + 1) +
                                  (i < 4 ? " must be >= 0" : " must be > 0"));
  }
}

bool CapacitanceSet::is_symmetric(double rel_tol) const {
  const double sq2 = std::sqrt(2.0);
  auto close = [rel_tol](double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= rel_tol * scale;
  };
  return close(c_[0], sq2 * c_[2]) && close(c_[1], sq2 * c_[2]) &&
         close(c_[3], c_[2]) && close(c_[7], c_[4]) && close(c_[8], c_[5]) &&
         close(c_[9], c_[6]);
}

WeakCouplingCheck check_weak_coupling(const CapacitanceSet& caps,
                                      double threshold) {
  const auto& c = caps.values();
  const double cross = std::max({c[0], c[1], c[2], c[3]});
  const double intra = std::min({c[4], c[5], c[6]});
  WeakCouplingCheck out;
  out.ratio = cross / intra;
  out.weak = out.ratio < threshold;
  return out;
}

ChargeConfig ChargeConfig::from_occupations(int n_A, int n_B, int n_C,
                                            int n_D) {
  if (n_A + n_B != n_C + n_D)
    throw std::invalid_argument(
        "ChargeConfig: requires nA + nB == nC + nD (shared total N)");
  ChargeConfig cfg;
  cfg.n_a = static_cast<double>(n_A - n_B);
  cfg.n_b = static_cast<double>(n_C - n_D);
  cfg.n_total = static_cast<double>(n_A + n_B);
  return cfg;
}

ChargeConfig ChargeConfig::reduced(double n_a, double n_b, double n_total) {
  if (!std::isfinite(n_a) || !std::isfinite(n_b) || !std::isfinite(n_total))
    throw std::invalid_argument("ChargeConfig: values must be finite");
  return ChargeConfig{n_a, n_b, n_total};
}

}  // namespace qdsim
