#include "qdsim/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qdsim/errors.hpp"

namespace qdsim {

namespace {

using Matrix16cd = Eigen::Matrix<std::complex<double>, 16, 16>;
using Vector16cd = Eigen::Matrix<std::complex<double>, 16, 1>;
using std::complex;

constexpr complex<double> kI{0.0, 1.0};

double total(const std::vector<PulseSegment>& segs) {
  double t = 0.0;
  for (const auto& s : segs) t += s.duration;
  return t;
}

void record_sample(ChargeTrace& tr, double t, double p0, double p1, double p2,
                   double p3) {
  const double n = p0 + p1 + p2 + p3;
  tr.t.push_back(t);
  tr.p00.push_back(p0);
  tr.p01.push_back(p1);
  tr.p10.push_back(p2);
  tr.p11.push_back(p3);
  tr.norm.push_back(n);
  tr.sz_a.push_back(p0 + p1 - p2 - p3);
  tr.sz_b.push_back(p0 - p1 + p2 - p3);
}

void record_state(ChargeTrace& tr, double t, const StateVector& psi) {
  record_sample(tr, t, std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2)),
                std::norm(psi(3)));
}

void record_rho(ChargeTrace& tr, double t, const DensityMatrix& rho) {
  record_sample(tr, t, rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
                rho(3, 3).real());
}

// X -> A X B as a matrix acting on the column-major vectorization of X
Matrix16cd spre_spost(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  Matrix16cd m = Matrix16cd::Zero();
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 4; ++r)
      for (int cc = 0; cc < 4; ++cc)
        for (int rr = 0; rr < 4; ++rr)
          m(4 * c + r, 4 * cc + rr) = a(r, rr) * b(cc, c);
  return m;
}

Matrix16cd dissipator(const Eigen::Matrix4cd& l) {
  const Eigen::Matrix4cd ldl = l.adjoint() * l;
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  return spre_spost(l, l.adjoint()) - 0.5 * spre_spost(ldl, id) -
         0.5 * spre_spost(id, ldl);
}

Eigen::Matrix4cd on_qubit_a(const Eigen::Matrix2cd& op) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m(2 * i, 2 * j) = op(i, j);
      m(2 * i + 1, 2 * j + 1) = op(i, j);
    }
  return m;
}

Eigen::Matrix4cd on_qubit_b(const Eigen::Matrix2cd& op) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      m(i, j) = op(i, j);
      m(i + 2, j + 2) = op(i, j);
    }
  return m;
}

// Lindblad generator for one bias segment
Matrix16cd bloch_generator(const TwoQubitHamiltonian& h, double t1, double t2) {
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  Matrix16cd gen = -kI * (spre_spost(h.matrix, id) - spre_spost(id, h.matrix));

  const double gamma = std::isinf(t1) ? 0.0 : 1.0 / t1;
  const double inv_t2 = std::isinf(t2) ? 0.0 : 1.0 / t2;
  double gamma_phi = 0.5 * (inv_t2 - 0.5 * gamma);
  if (gamma_phi < 0.0) gamma_phi = 0.0;  // t2 <= 2 t1 already enforced

  Eigen::Matrix2cd sp = Eigen::Matrix2cd::Zero();
  sp(0, 1) = 1.0;                       // |0><1|
  const Eigen::Matrix2cd sm = sp.adjoint();
  Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;

  for (const auto& embed : {&on_qubit_a, &on_qubit_b}) {
    if (gamma > 0.0) {
      gen += 0.5 * gamma * dissipator(embed(sp));
      gen += 0.5 * gamma * dissipator(embed(sm));
    }
    if (gamma_phi > 0.0) gen += gamma_phi * dissipator(embed(sz));
  }
  return gen;
}

}  // namespace

double PulseSchedule::total_duration() const { return total(segments); }

void PulseSchedule::validate() const {
  if (segments.empty())
    throw std::invalid_argument("PulseSchedule: empty schedule");
  for (const auto& s : segments) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration))
      throw std::invalid_argument("PulseSchedule: durations must be > 0");
    if (!std::isfinite(s.bias.va) || !std::isfinite(s.bias.vb))
      throw std::invalid_argument("PulseSchedule: bias must be finite");
  }
}

UnitaryEvolution evolve_unitary(const CapacitanceSet& caps, double n_total,
                                const Tunneling& tunneling,
                                const PulseSchedule& schedule,
                                const StateVector& psi0, double sample_dt) {
  schedule.validate();
  if (!(sample_dt > 0.0))
    throw std::invalid_argument("evolve_unitary: sample_dt must be > 0");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("evolve_unitary: psi0 is not normalized");

  UnitaryEvolution out;
  StateVector psi = psi0;
  double t0 = 0.0;
  long next = 0;  // next global sample index

  for (const auto& seg : schedule.segments) {
    const QubitParams p = qubit_parameters(caps, n_total, seg.bias,
                                           tunneling.omega_a, tunneling.omega_b);
    const Eigensystem es = eigensystem(build_hamiltonian(p));
    const Eigen::Vector4cd coeff = es.vectors.adjoint() * psi;

    auto at = [&](double tau) -> StateVector {
      Eigen::Vector4cd phased;
      for (int k = 0; k < 4; ++k)
        phased(k) = std::exp(-kI * es.values(k) * tau) * coeff(k);
      return es.vectors * phased;
    };

    const double t_end = t0 + seg.duration;
    while (static_cast<double>(next) * sample_dt < t_end) {
      const double ts = static_cast<double>(next) * sample_dt;
      record_state(out.trace, ts, at(ts - t0));
      ++next;
    }
    psi = at(seg.duration);  // segment-exact handoff, independent of sampling
    t0 = t_end;
  }
  if (out.trace.t.empty() || out.trace.t.back() < t0 * (1.0 - 1e-15))
    record_state(out.trace, t0, psi);
  out.final_state = psi;
  return out;
}

BlochEvolution evolve_bloch(const CapacitanceSet& caps, double n_total,
                            const Tunneling& tunneling,
                            const PulseSchedule& schedule,
                            const DensityMatrix& rho0, double t1, double t2,
                            double sample_dt) {
  schedule.validate();
  if (!(sample_dt > 0.0))
    throw std::invalid_argument("evolve_bloch: sample_dt must be > 0");
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw std::invalid_argument("evolve_bloch: t1 and t2 must be > 0");
  const double inv_t1 = std::isinf(t1) ? 0.0 : 1.0 / t1;
  const double inv_t2 = std::isinf(t2) ? 0.0 : 1.0 / t2;
  if (inv_t2 < 0.5 * inv_t1 * (1.0 - 1e-12))
    throw std::invalid_argument("evolve_bloch: t2 > 2*t1 is unphysical");
  if ((rho0 - rho0.adjoint()).norm() > 1e-9)
    throw std::invalid_argument("evolve_bloch: rho0 is not Hermitian");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-10 ||
      std::abs(rho0.trace().imag()) > 1e-10)
    throw std::invalid_argument("evolve_bloch: rho0 must have unit trace");
  {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> es(
        0.5 * (rho0 + rho0.adjoint()));
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument("evolve_bloch: rho0 is not positive");
  }

  BlochEvolution out;
  DensityMatrix rho = rho0;
  double t0 = 0.0;
  long next = 0;

  for (const auto& seg : schedule.segments) {
    const QubitParams p = qubit_parameters(caps, n_total, seg.bias,
                                           tunneling.omega_a, tunneling.omega_b);
    const Matrix16cd gen = bloch_generator(build_hamiltonian(p), t1, t2);
    const Eigen::Map<const Vector16cd> v0(rho.data());

    const double t_end = t0 + seg.duration;
    // samples: exact exponential for the first point of the segment, then
    // the fixed-step propagator (observation only; the handoff below does
    // not depend on the sampling grid)
    bool have_sampler = false;
    Matrix16cd step;
    Vector16cd vs;
    while (static_cast<double>(next) * sample_dt < t_end) {
      const double ts = static_cast<double>(next) * sample_dt;
      if (!have_sampler) {
        vs = (gen * (ts - t0)).exp() * v0;
        step = (gen * sample_dt).exp();
        have_sampler = true;
      } else {
        vs = step * vs;
      }
      DensityMatrix rs = Eigen::Map<const DensityMatrix>(vs.data());
      record_rho(out.trace, ts, rs);
      ++next;
    }

    const Vector16cd vf = (gen * seg.duration).exp() * v0;
    rho = Eigen::Map<const DensityMatrix>(vf.data());
    t0 = t_end;
  }
  if (out.trace.t.empty() || out.trace.t.back() < t0 * (1.0 - 1e-15))
    record_rho(out.trace, t0, rho);
  out.final_rho = rho;
  return out;
}

PeriodEstimate oscillation_period(const ChargeTrace& trace, Qubit which) {
  const std::vector<double>& s = (which == Qubit::a) ? trace.sz_a : trace.sz_b;
  const std::vector<double>& t = trace.t;
  PeriodEstimate out;
  if (s.size() < 8) return out;

  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  double amp = 0.0;
  for (double v : s) amp = std::max(amp, std::abs(v - mean));
  if (amp < 1e-10) return out;  // constant signal

  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const double a = s[k] - mean, b = s[k + 1] - mean;
    if (a * b < 0.0)
      crossings.push_back(t[k] + (t[k + 1] - t[k]) * a / (a - b));
  }
  out.crossings = crossings.size();
  if (crossings.size() < 4) return out;

  out.period = 2.0 * (crossings.back() - crossings.front()) /
               static_cast<double>(crossings.size() - 1);

  // spectral cross-check on the uniform prefix of the sampling grid
  const double dt = t[1] - t[0];
  std::size_t n_uniform = 2;
  while (n_uniform < t.size() &&
         std::abs(t[n_uniform] - t[n_uniform - 1] - dt) < 1e-9 * dt)
    ++n_uniform;
  const double span = t[n_uniform - 1] - t[0];
  const int bins = 2048;
  const double f_lo = 1.0 / span;
  const double f_hi = 0.5 / dt;
  double best_f = f_lo, best_p = -1.0, prev_p = 0.0, next_p = 0.0;
  std::vector<double> power(static_cast<std::size_t>(bins));
  for (int m = 0; m < bins; ++m) {
    const double f =
        f_lo + (f_hi - f_lo) * static_cast<double>(m) / (bins - 1);
    complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < n_uniform; ++k)
      acc += (s[k] - mean) * std::exp(-2.0 * std::numbers::pi * kI * f * t[k]);
    power[static_cast<std::size_t>(m)] = std::norm(acc);
  }
  int best_m = 0;
  for (int m = 0; m < bins; ++m)
    if (power[static_cast<std::size_t>(m)] > best_p) {
      best_p = power[static_cast<std::size_t>(m)];
      best_m = m;
    }
  const double df = (f_hi - f_lo) / (bins - 1);
  best_f = f_lo + df * best_m;
  if (best_m > 0 && best_m < bins - 1) {
    prev_p = power[static_cast<std::size_t>(best_m - 1)];
    next_p = power[static_cast<std::size_t>(best_m + 1)];
    const double denom = prev_p - 2.0 * best_p + next_p;
    if (denom < 0.0) best_f += 0.5 * df * (prev_p - next_p) / denom;
  }
  out.period_spectral = 1.0 / best_f;
  out.oscillating = true;
  return out;
}

CnotPlan cnot_schedule(const CapacitanceSet& caps, double n_total,
                       double omega_a, int control_state) {
  if (!(omega_a > 0.0))
    throw std::invalid_argument("cnot_schedule: omega_a must be > 0");
  if (control_state != 0 && control_state != 1)
    throw std::invalid_argument("cnot_schedule: control state must be 0 or 1");
  const QubitParams park_params =
      qubit_parameters(caps, n_total, GateBias{0.0, 0.0}, omega_a, 0.0);
  if (!(park_params.eta > 0.0))
    throw ValidityError(
        "cnot_schedule: eta = 0 (no cross capacitance), the level crossing "
        "does not depend on the control state; conditional gate impossible");

  CnotPlan plan;
  plan.t_pi = std::numbers::pi / (2.0 * omega_a);
  plan.resonant_va = level_crossing_voltage(caps, n_total, control_state);
  plan.park = GateBias{0.0, 0.0};

  if (omega_a > 0.1 * park_params.eta)
    plan.warnings.push_back(
        "omega_a is not small against eta; off-resonant leakage of order "
        "omega^2/(omega^2 + eta^2/4) will degrade the conditional gate");
  const double gap = std::min(std::abs(park_params.eps_a - park_params.eta / 4),
                              std::abs(park_params.eps_a + park_params.eta / 4));
  if (gap < 20.0 * omega_a)
    plan.warnings.push_back(
        "park bias lies close to a conditional resonance; parked populations "
        "will drift");

  const double t_park = 0.1 * plan.t_pi;
  plan.schedule.segments = {
      {plan.park, t_park},
      {GateBias{plan.resonant_va, 0.0}, plan.t_pi},
      {plan.park, t_park},
  };
  return plan;
}

Eigen::Matrix4d truth_table_for_schedule(const CapacitanceSet& caps,
                                         double n_total,
                                         const Tunneling& tunneling,
                                         const PulseSchedule& schedule) {
  Eigen::Matrix4d table = Eigen::Matrix4d::Zero();
  for (int in = 0; in < 4; ++in) {
    StateVector psi0 = StateVector::Zero();
    psi0(in) = 1.0;
    const auto ev = evolve_unitary(caps, n_total, tunneling, schedule, psi0,
                                   schedule.total_duration());
    for (int outp = 0; outp < 4; ++outp)
      table(in, outp) = std::norm(ev.final_state(outp));
  }
  return table;
}

Eigen::Matrix4d truth_table(const CapacitanceSet& caps, double n_total,
                            double omega_a, int control_state) {
  const CnotPlan plan = cnot_schedule(caps, n_total, omega_a, control_state);
  return truth_table_for_schedule(caps, n_total, Tunneling{omega_a, 0.0},
                                  plan.schedule);
}

Eigen::Matrix4d cnot_permutation(int control_state) {
  Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
  for (int in = 0; in < 4; ++in) {
    const int n_a = in >> 1, n_b = in & 1;
    const int out_a = (n_b == control_state) ? 1 - n_a : n_a;
    p(in, 2 * out_a + n_b) = 1.0;
  }
  return p;
}

}  // namespace qdsim
