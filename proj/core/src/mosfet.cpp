#include "qdsim/mosfet.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qdsim/errors.hpp"

namespace qdsim {

namespace {

double max_abs(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

// currents of all N segments for interior nodes v (size N-1)
Eigen::VectorXd segment_currents(const ChannelParams& p,
                                 const std::vector<double>& vg,
                                 const Eigen::VectorXd& v, double v_ds,
                                 bool linear) {
  const int n = static_cast<int>(vg.size());
  Eigen::VectorXd cur(n);
  for (int i = 0; i < n; ++i) {
    const double lo = (i == 0) ? 0.0 : v(i - 1);
    const double hi = (i == n - 1) ? v_ds : v(i);
    cur(i) = segment_current(p, vg[static_cast<std::size_t>(i)], lo, hi, linear);
  }
  return cur;
}

}  // namespace

void ChannelParams::validate() const {
  auto pos = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!pos(width) || !pos(mobility) || !pos(c_ox) || !pos(segment_length) ||
      !pos(phi_b))
    throw std::invalid_argument(
        "ChannelParams: width, mobility, c_ox, segment_length, phi_b must be > 0");
  if (!(q_depletion >= 0.0) || !std::isfinite(q_depletion))
    throw std::invalid_argument("ChannelParams: q_depletion must be >= 0");
  if (!std::isfinite(v_flat_band))
    throw std::invalid_argument("ChannelParams: v_flat_band must be finite");
}

ChannelParams ChannelParams::from_beta_alpha(double beta0, double alpha) {
  if (!(beta0 > 0.0)) throw std::invalid_argument("beta0 must be > 0");
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  ChannelParams p;
  p.width = beta0;
  p.mobility = 1.0;
  p.c_ox = 1.0;
  p.segment_length = 1.0;
  p.phi_b = 0.25;
  p.q_depletion = (alpha - 1.0) * 4.0 * p.phi_b * p.c_ox;
  p.v_flat_band = -(2.0 * p.phi_b + p.q_depletion / p.c_ox);  // v_th = 0
  p.validate();
  return p;
}

double segment_current(const ChannelParams& p, double v_g_eff, double v_lo,
                       double v_hi, bool linear_model) {
  const double drop = v_hi - v_lo;
  if (linear_model) return p.beta0() * v_g_eff * drop;
  return p.beta0() *
         (v_g_eff * drop - 0.5 * p.alpha() * (v_hi * v_hi - v_lo * v_lo));
}

void QubitThresholdMap::validate() const {
  if (dv_th.empty())
    throw std::invalid_argument("QubitThresholdMap: needs >= 1 segment");
  for (double d : dv_th)
    if (!(d >= 0.0) || !std::isfinite(d))
      throw std::invalid_argument("QubitThresholdMap: shifts must be >= 0");
}

ChannelSolution solve_series(const ChannelParams& p,
                             const std::vector<double>& vg, double v_ds,
                             const SolveOptions& opts) {
  p.validate();
  const int n = static_cast<int>(vg.size());
  if (n < 1) throw std::invalid_argument("solve_series: needs >= 1 segment");
  if (!(v_ds >= 0.0) || !std::isfinite(v_ds))
    throw std::invalid_argument("solve_series: v_ds must be >= 0");

  const double alpha = opts.linear_model ? 0.0 : p.alpha();
  const double beta0 = p.beta0();

  ChannelSolution sol;
  for (double g : vg) {
    if (!(g > 0.0))
      throw ValidityError("solve_series: non-positive overdrive; segment off");
    if (g <= p.alpha() * v_ds) {
      std::ostringstream os;
      os << "weak overdrive: v_g_eff = " << g << " <= alpha*v_ds = "
         << p.alpha() * v_ds << "; outside the small-V_D validity region";
      sol.warnings.push_back(os.str());
    }
  }

  if (n == 1) {
    sol.node_voltages = {0.0, v_ds};
    sol.current = segment_current(p, vg[0], 0.0, v_ds, opts.linear_model);
    sol.residual = 0.0;
    sol.iterations = 0;
    if (!opts.linear_model && v_ds > vg[0] / p.alpha())
      throw ValidityError("solve_series: drain voltage beyond pinch-off");
    return sol;
  }

  // unknown interior nodes, linear-ladder start
  Eigen::VectorXd v(n - 1);
  for (int i = 0; i < n - 1; ++i)
    v(i) = v_ds * static_cast<double>(i + 1) / static_cast<double>(n);

  Eigen::VectorXd cur = segment_currents(p, vg, v, v_ds, opts.linear_model);
  auto residual_vec = [&](const Eigen::VectorXd& c) {
    return Eigen::VectorXd(c.tail(n - 1) - c.head(n - 1));
  };
  Eigen::VectorXd r = residual_vec(cur);

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    if (max_abs(r) < opts.rel_tolerance * std::max(std::abs(cur.mean()), 1e-300))
      break;

    // tridiagonal Jacobian of r_i = I_{i+1} - I_i w.r.t. the interior nodes
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n - 1, n - 1);
    for (int i = 0; i < n - 1; ++i) {
      const double vi = v(i);
      if (i > 0) jac(i, i - 1) = beta0 * (vg[static_cast<std::size_t>(i)] - alpha * v(i - 1));
      jac(i, i) = -beta0 * (vg[static_cast<std::size_t>(i)] +
                            vg[static_cast<std::size_t>(i + 1)] - 2.0 * alpha * vi);
      if (i < n - 2) jac(i, i + 1) = beta0 * (vg[static_cast<std::size_t>(i + 1)] - alpha * v(i + 1));
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    const Eigen::VectorXd dv = lu.solve(-r);
    if (!dv.allFinite())
      throw SolverError("solve_series: singular Jacobian (pinch-off region?)");

    // step halving on residual increase
    double scale = 1.0;
    Eigen::VectorXd v_new, r_new, cur_new;
    int halves = 0;
    for (;; ++halves) {
      v_new = v + scale * dv;
      cur_new = segment_currents(p, vg, v_new, v_ds, opts.linear_model);
      r_new = residual_vec(cur_new);
      if (max_abs(r_new) < max_abs(r) || halves >= opts.max_damping_halves)
        break;
      scale *= 0.5;
    }
    if (opts.diagnostics)
      *opts.diagnostics << "newton it=" << it << " |r|=" << max_abs(r_new)
                        << " step=" << scale << "\n";
    v = v_new;
    cur = cur_new;
    r = r_new;
  }

  sol.current = cur.mean();
  sol.residual = max_abs(r) / std::max(std::abs(sol.current), 1e-300);
  sol.iterations = it;

  if (sol.residual >= opts.rel_tolerance) {
    // distinguish pinch-off (a segment cannot carry the demanded current)
    // from plain non-convergence via the forward-sweep discriminant
    double lo = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = vg[static_cast<std::size_t>(i)];
      if (alpha > 0.0) {
        const double disc = g * g - 2.0 * alpha * (g * lo - 0.5 * alpha * lo * lo) -
                            2.0 * alpha * sol.current / beta0;
        if (disc < 0.0)
          throw ValidityError(
              "solve_series: pinch-off, segment " + std::to_string(i + 1) +
              " cannot carry the series current (negative discriminant)");
        lo = (g - std::sqrt(disc)) / alpha;
      }
    }
    std::ostringstream os;
    os << "solve_series: no convergence after " << it
       << " iterations; residual " << sol.residual << " (tol "
       << opts.rel_tolerance << ")";
    throw SolverError(os.str());
  }

  sol.node_voltages.resize(static_cast<std::size_t>(n) + 1);
  sol.node_voltages.front() = 0.0;
  for (int i = 0; i < n - 1; ++i) sol.node_voltages[static_cast<std::size_t>(i) + 1] = v(i);
  sol.node_voltages.back() = v_ds;

  // accepted solutions must be ordered and below pinch-off
  const double tol = 1e-12 * std::max(1.0, v_ds);
  for (int i = 0; i + 1 < n + 1; ++i)
    if (sol.node_voltages[static_cast<std::size_t>(i)] >
        sol.node_voltages[static_cast<std::size_t>(i) + 1] + tol)
      throw ValidityError("solve_series: node voltages not monotone");
  if (!opts.linear_model)
    for (int i = 0; i < n; ++i)
      if (sol.node_voltages[static_cast<std::size_t>(i) + 1] >
          vg[static_cast<std::size_t>(i)] / p.alpha() + tol)
        throw ValidityError("solve_series: pinch-off, node voltage beyond "
                            "v_g_eff/alpha in segment " + std::to_string(i + 1));
  return sol;
}

ChannelSolution solve_series(const ChannelParams& p, double v_gate,
                             const QubitThresholdMap& thresholds, double v_ds,
                             const SolveOptions& opts) {
  thresholds.validate();
  std::vector<double> vg;
  vg.reserve(thresholds.dv_th.size());
  for (double d : thresholds.dv_th) vg.push_back(v_gate - p.v_th() - d);
  return solve_series(p, vg, v_ds, opts);
}

double two_qubit_current(const ChannelParams& p, double v_g1, double v_g2,
                         double v_d) {
  if (v_g1 + v_g2 == 0.0)
    throw std::invalid_argument("two_qubit_current: v_g1 + v_g2 must be nonzero");
  return p.beta0() / (v_g1 + v_g2) *
         (v_g1 * v_g2 * v_d - 0.5 * p.alpha() * v_g1 * v_d * v_d);
}

DeltaCurrent delta_current_two_qubit(const ChannelParams& p, double v_g,
                                     double dv_th, double v_d,
                                     const SolveOptions& opts) {
  if (!(dv_th >= 0.0) || !(dv_th < v_g))
    throw std::invalid_argument(
        "delta_current_two_qubit: requires 0 <= dv_th < v_g");
  DeltaCurrent out;
  out.formula = p.beta0() * p.alpha() / (2.0 * (2.0 * v_g - dv_th)) * dv_th *
                v_d * v_d;
  out.current_shift_1 = solve_series(p, {v_g - dv_th, v_g}, v_d, opts).current;
  out.current_shift_2 = solve_series(p, {v_g, v_g - dv_th}, v_d, opts).current;
  out.solver = out.current_shift_1 - out.current_shift_2;
  return out;
}

ReadoutMap readout_map(const ChannelParams& p, const ReadoutSetup& setup,
                       const std::array<double, 4>& populations,
                       const SolveOptions& opts) {
  double psum = 0.0;
  for (double q : populations) {
    if (!(q >= 0.0) || !std::isfinite(q))
      throw std::invalid_argument("readout_map: populations must be >= 0");
    psum += q;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("readout_map: populations must sum to 1");

  ReadoutMap out;
  for (int s = 0; s < 4; ++s) {
    const int n_a = s >> 1, n_b = s & 1;
    QubitThresholdMap map;
    map.dv_th = {setup.dvth_a[static_cast<std::size_t>(n_a)],
                 setup.dvth_b[static_cast<std::size_t>(n_b)]};
    out.state_currents[static_cast<std::size_t>(s)] =
        solve_series(p, setup.v_gate, map, setup.v_ds, opts).current;
    out.mean_current += populations[static_cast<std::size_t>(s)] *
                        out.state_currents[static_cast<std::size_t>(s)];
  }
  return out;
}

}  // namespace qdsim
