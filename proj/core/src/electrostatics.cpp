#include "qdsim/electrostatics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qdsim/errors.hpp"

namespace qdsim {

namespace {

// constraint rows over (q1..q10): A q = -(N_A, N_B, N_C, N_D)
constexpr int kConstraintRows[4][10] = {
    {1, 0, 1, 0, 1, 1, 0, 0, 0, 0},
    {0, 1, 0, 1, 0, -1, 1, 0, 0, 0},
    {-1, 0, 0, -1, 0, 0, 0, 1, 1, 0},
    {0, -1, -1, 0, 0, 0, 0, 0, -1, 1},
};

void require_symmetric(const CapacitanceSet& caps, const char* where) {
  if (!caps.is_symmetric())
    throw std::invalid_argument(std::string(where) +
                                ": capacitance set violates the symmetry "
                                "constraints (c1=c2=sqrt(2)c3=sqrt(2)c4, "
                                "c8=c5, c9=c6, c10=c7)");
}

struct TwoLevelCoeffs {
  double e_c;    // charging energy
  double eta;    // inter-qubit coupling
  double m;      // (C7-C5)/(C5+C7), N lever arm
  double k;      // 2 C5 C7/(C5+C7), gate lever arm
};

TwoLevelCoeffs two_level_coeffs(const CapacitanceSet& caps) {
  const double c3 = caps.c(3), c5 = caps.c(5), c6 = caps.c(6), c7 = caps.c(7);
  const double sigma = c5 * c6 + c6 * c7 + c7 * c5;
  TwoLevelCoeffs o;
  o.e_c = (c5 + c7) / (8.0 * sigma);
  o.eta = std::sqrt(2.0) * (c5 * c5 + c7 * c7 - std::sqrt(2.0) * c5 * c7) /
          (4.0 * sigma * sigma) * c3;
  o.m = (c7 - c5) / (c5 + c7);
  o.k = 2.0 * c5 * c7 / (c5 + c7);
  return o;
}

}  // namespace

double raw_energy(const CapacitanceSet& caps, const std::array<double, 10>& q,
                  const GateBias& bias) {
  double u = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double c = caps.values()[i];
    if (c > 0.0) {
      u += q[i] * q[i] / (2.0 * c);
    } else if (q[i] != 0.0) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return u - q[6] * bias.va - q[9] * bias.vb;
}

MinimizeResult minimize_energy(const CapacitanceSet& caps,
                               const ChargeConfig& config,
                               const GateBias& bias) {
  // active variables: capacitors with c_i > 0 (a zero capacitor pins q_i = 0)
  std::vector<int> act;
  act.reserve(10);
  for (int i = 0; i < 10; ++i)
    if (caps.values()[i] > 0.0) act.push_back(i);
  const int n = static_cast<int>(act.size());

  // stationarity: q_i / c_i - v_i + sum_r A_ri lambda_r = 0, plus A q = b
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 4, n + 4);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 4);
  for (int j = 0; j < n; ++j) {
    const int i = act[j];
    kkt(j, j) = 1.0 / caps.values()[i];
    for (int r = 0; r < 4; ++r) {
      kkt(j, n + r) = kConstraintRows[r][i];
      kkt(n + r, j) = kConstraintRows[r][i];
    }
    if (i == 6) rhs(j) = bias.va;
    if (i == 9) rhs(j) = bias.vb;
  }
  rhs(n + 0) = -config.occupation_a();
  rhs(n + 1) = -config.occupation_b();
  rhs(n + 2) = -config.occupation_c();
  rhs(n + 3) = -config.occupation_d();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible())
    throw SolverError(
        "minimize_energy: singular KKT system (degenerate capacitances)");
  const Eigen::VectorXd sol = lu.solve(rhs);

  MinimizeResult out;
  out.charges.fill(0.0);
  for (int j = 0; j < n; ++j) out.charges[static_cast<std::size_t>(act[j])] = sol(j);
  out.energy = raw_energy(caps, out.charges, bias);
  return out;
}

ClosedFormBlocks closed_form_blocks(const CapacitanceSet& caps,
                                    const GateBias& bias) {
  require_symmetric(caps, "closed_form_blocks");
  const double c3 = caps.c(3), c5 = caps.c(5), c6 = caps.c(6), c7 = caps.c(7);
  ClosedFormBlocks b;
  b.varrho = 2.0 * std::sqrt(2.0) + 1.0;
  b.c_A = c3 + c5 + c6;
  b.c_B = c3 + c6 + c7;
  b.c_C = b.varrho * c3 + c5 + c6;
  b.c_D = b.varrho * c3 + c6 + c7;
  b.d_ab = b.c_A * b.c_B - (c3 + c6) * (c3 + c6);
  b.d_cd = b.c_C * b.c_D - (c6 - c3) * (c6 - c3);
  b.inv_c_a = (c5 + c7) / ((c5 + c7) * (c3 + c6) + c5 * c7);
  b.inv_c_b = (c5 + c7 + 2.0 * (b.varrho + 1.0) * c3) / b.d_cd;
  b.v_plus = bias.va + bias.vb;
  b.v_minus = bias.va - bias.vb;
  return b;
}

double closed_form_energy(const CapacitanceSet& caps, double n_a, double n_b,
                          double n_total, const GateBias& bias) {
  const ClosedFormBlocks b = closed_form_blocks(caps, bias);
  const double c3 = caps.c(3), c5 = caps.c(5), c6 = caps.c(6), c7 = caps.c(7);
  const double N = n_total;

  const double quad = (b.inv_c_a + b.inv_c_b) / 16.0 * (n_a * n_a + n_b * n_b);
  const double cross = (b.inv_c_a - b.inv_c_b) / 8.0 * n_a * n_b;

  // shared N / V+ part of the linear coefficients, plus the V- part that
  // enters with opposite sign for the two qubits
  const double lin_common =
      ((c7 - c5) * N - c5 * c7 * b.v_plus) / (4.0 * b.d_ab);
  const double lin_vm = c7 * (c6 - c3 - b.c_C) * b.v_minus / (4.0 * b.d_cd);

  const double bracket = (c3 + c6 + b.c_A) / b.c_A * N + c7 * b.v_plus;
  const double constant =
      N * N / (4.0 * b.c_A) + b.c_A / (4.0 * b.d_ab) * bracket * bracket +
      b.c_C / (4.0 * b.d_cd) * (c7 * b.v_minus) * (c7 * b.v_minus) -
      0.25 * c7 * (b.v_plus * b.v_plus + b.v_minus * b.v_minus);

  return quad + cross + (lin_common + lin_vm) * n_a +
         (lin_common - lin_vm) * n_b + constant;
}

double expanded_energy(const CapacitanceSet& caps, double n_a, double n_b,
                       double n_total, const GateBias& bias) {
  require_symmetric(caps, "expanded_energy");
  const TwoLevelCoeffs t = two_level_coeffs(caps);
  const double xa =
      n_a + t.eta / (2.0 * t.e_c) * n_b + t.m * n_total - t.k * bias.va;
  const double xb = n_b + t.m * n_total - t.k * bias.vb;
  return t.e_c * (xa * xa + xb * xb);
}

QubitParams qubit_parameters(const CapacitanceSet& caps, double n_total,
                             const GateBias& bias, double omega_a,
                             double omega_b) {
  require_symmetric(caps, "qubit_parameters");
  const TwoLevelCoeffs t = two_level_coeffs(caps);
  QubitParams p;
  p.e_c = t.e_c;
  p.eta = t.eta;
  p.eps_a = t.e_c * (0.5 + t.m * n_total - t.k * bias.va);
  p.eps_b = t.e_c * (0.5 + t.m * n_total - t.k * bias.vb);
  p.omega_a = omega_a;
  p.omega_b = omega_b;
  return p;
}

}  // namespace qdsim
