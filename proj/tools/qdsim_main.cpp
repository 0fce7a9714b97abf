// qdsim: batch front-end for the coupled-charge-qubit / MOSFET-readout
// simulator.  Subcommands read a JSON device description and emit
// deterministic CSV tables (17 significant digits, LF endings); run
// metadata goes to a sidecar file, never into the data stream.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdsim/config.hpp"
#include "qdsim/csv.hpp"
#include "qdsim/dynamics.hpp"
#include "qdsim/electrostatics.hpp"
#include "qdsim/errors.hpp"
#include "qdsim/hamiltonian.hpp"
#include "qdsim/mosfet.hpp"
#include "qdsim/units.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr const char* kVersion = "0.1.0";

struct GlobalOpts {
  std::string config_path;
  std::string out_path;      // empty = stdout
  std::string units_flag;    // "", "natural", "physical"
  bool verbose = false;
};

struct UnitScales {
  bool physical = false;
  double energy() const { return physical ? qdsim::units::energy_unit_mev : 1.0; }
  double voltage() const { return physical ? qdsim::units::voltage_unit_volt : 1.0; }
  double time() const { return physical ? qdsim::units::time_unit_second : 1.0; }
  std::string suffix(const char* kind) const {
    if (!physical) return "";
    if (kind == std::string("e")) return "_mev";
    if (kind == std::string("v")) return "_volt";
    return "_s";
  }
};

std::vector<double> parse_linspace(const std::string& spec,
                                   const std::string& what) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (...) {
      throw qdsim::ConfigError(what + ": cannot parse '" + spec +
                               "' (expected value or lo:hi:points)");
    }
  }
  if (parts.size() == 1) return {parts[0]};
  if (parts.size() != 3 || parts[2] < 1 ||
      parts[2] != std::floor(parts[2]))
    throw qdsim::ConfigError(what + ": expected value or lo:hi:points, got '" +
                             spec + "'");
  const int n = static_cast<int>(parts[2]);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out.push_back(n == 1 ? parts[0]
                         : parts[0] + (parts[1] - parts[0]) * k / (n - 1.0));
  return out;
}

std::pair<int, int> parse_int_range(const std::string& spec,
                                    const std::string& what) {
  const auto pos = spec.find(':');
  try {
    if (pos == std::string::npos) {
      const int v = std::stoi(spec);
      return {v, v};
    }
    const int lo = std::stoi(spec.substr(0, pos));
    const int hi = std::stoi(spec.substr(pos + 1));
    if (hi < lo) throw std::invalid_argument("range");
    return {lo, hi};
  } catch (...) {
    throw qdsim::ConfigError(what + ": expected int or min:max, got '" + spec +
                             "'");
  }
}

// data goes to --out (or stdout); run metadata to a sidecar next to it
struct OutputSink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;

  explicit OutputSink(const GlobalOpts& g, const std::string& subcommand) {
    if (g.out_path.empty()) return;
    file = std::make_unique<std::ofstream>(g.out_path, std::ios::binary);
    if (!*file)
      throw qdsim::ConfigError("cannot open output file: " + g.out_path);
    os = file.get();

    std::ofstream meta(g.out_path + ".meta.json", std::ios::binary);
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&tt));
    meta << "{\n  \"tool\": \"qdsim\",\n  \"version\": \"" << kVersion
         << "\",\n  \"subcommand\": \"" << subcommand
         << "\",\n  \"config\": \"" << g.config_path
         << "\",\n  \"generated_utc\": \"" << stamp << "\"\n}\n";
  }
};

qdsim::DeviceConfig load_config(const GlobalOpts& g) {
  if (g.config_path.empty())
    throw qdsim::ConfigError("--config <path> is required");
  return qdsim::DeviceConfig::load(g.config_path);
}

UnitScales scales_for(const GlobalOpts& g, const qdsim::DeviceConfig& cfg) {
  UnitScales s;
  if (!g.units_flag.empty())
    s.physical = g.units_flag == "physical";
  else
    s.physical = cfg.units == qdsim::UnitSystem::physical;
  return s;
}

int cmd_energy(const GlobalOpts& g, const std::string& na_spec,
               const std::string& nb_spec, const std::string& va_spec,
               const std::string& vb_spec) {
  const auto cfg = load_config(g);
  const auto us = scales_for(g, cfg);
  const auto [na_lo, na_hi] = parse_int_range(na_spec, "--na");
  const auto [nb_lo, nb_hi] = parse_int_range(nb_spec, "--nb");
  const auto vas = parse_linspace(va_spec, "--va");
  const auto vbs = parse_linspace(vb_spec, "--vb");

  OutputSink sink(g, "energy");
  qdsim::CsvWriter w(*sink.os);
  const std::string e = us.suffix("e"), v = us.suffix("v");
  w.header({"n_a", "n_b", "v_a" + v, "v_b" + v, "u_closed" + e,
            "u_expanded" + e, "u_oracle" + e});

  for (double va : vas)
    for (double vb : vbs) {
      const qdsim::GateBias bias{va, vb};
      const double closed0 =
          qdsim::closed_form_energy(cfg.caps, 0, 0, cfg.n_total, bias);
      const double expanded0 =
          qdsim::expanded_energy(cfg.caps, 0, 0, cfg.n_total, bias);
      const double oracle0 =
          qdsim::minimize_energy(cfg.caps,
                                 qdsim::ChargeConfig::reduced(0, 0, cfg.n_total),
                                 bias)
              .energy;
      for (int na = na_lo; na <= na_hi; ++na)
        for (int nb = nb_lo; nb <= nb_hi; ++nb) {
          const double uc =
              qdsim::closed_form_energy(cfg.caps, na, nb, cfg.n_total, bias) -
              closed0;
          const double ue =
              qdsim::expanded_energy(cfg.caps, na, nb, cfg.n_total, bias) -
              expanded0;
          const double uo =
              qdsim::minimize_energy(
                  cfg.caps, qdsim::ChargeConfig::reduced(na, nb, cfg.n_total),
                  bias)
                  .energy -
              oracle0;
          w.row({static_cast<double>(na), static_cast<double>(nb),
                 va * us.voltage(), vb * us.voltage(), uc * us.energy(),
                 ue * us.energy(), uo * us.energy()});
        }
    }
  return kExitOk;
}

int cmd_spectrum(const GlobalOpts& g, const std::string& va_spec,
                 double vb) {
  const auto cfg = load_config(g);
  const auto us = scales_for(g, cfg);
  const auto vas = parse_linspace(va_spec, "--va");

  OutputSink sink(g, "spectrum");
  qdsim::CsvWriter w(*sink.os);
  const std::string e = us.suffix("e"), v = us.suffix("v");
  w.header({"v_a" + v, "e0" + e, "e1" + e, "e2" + e, "e3" + e});
  for (double va : vas) {
    const auto p = qdsim::qubit_parameters(cfg.caps, cfg.n_total,
                                           qdsim::GateBias{va, vb},
                                           cfg.tunneling.omega_a,
                                           cfg.tunneling.omega_b);
    const auto es = qdsim::eigensystem(qdsim::build_hamiltonian(p));
    w.row({va * us.voltage(), es.values(0) * us.energy(),
           es.values(1) * us.energy(), es.values(2) * us.energy(),
           es.values(3) * us.energy()});
  }
  return kExitOk;
}

qdsim::StateVector parse_state(const std::string& label) {
  static const std::vector<std::string> names = {"00", "01", "10", "11"};
  for (int i = 0; i < 4; ++i)
    if (label == names[static_cast<std::size_t>(i)]) {
      qdsim::StateVector psi = qdsim::StateVector::Zero();
      psi(i) = 1.0;
      return psi;
    }
  throw qdsim::ConfigError("--state: expected one of 00, 01, 10, 11");
}

int cmd_evolve(const GlobalOpts& g, const std::string& state_label, double dt,
               bool dissipative) {
  const auto cfg = load_config(g);
  const auto us = scales_for(g, cfg);
  if (!cfg.schedule)
    throw qdsim::ConfigError("evolve requires a 'schedule' in the config");
  const double total = cfg.schedule->total_duration();
  const double sample_dt = dt > 0.0 ? dt : total / 500.0;
  const qdsim::StateVector psi0 = parse_state(state_label);

  OutputSink sink(g, "evolve");
  qdsim::ChargeTrace trace;
  if (dissipative) {
    const qdsim::DensityMatrix rho0 = psi0 * psi0.adjoint();
    trace = qdsim::evolve_bloch(cfg.caps, cfg.n_total, cfg.tunneling,
                                *cfg.schedule, rho0, cfg.t1, cfg.t2, sample_dt)
                .trace;
  } else {
    trace = qdsim::evolve_unitary(cfg.caps, cfg.n_total, cfg.tunneling,
                                  *cfg.schedule, psi0, sample_dt)
                .trace;
  }
  qdsim::write_trace_csv(*sink.os, trace, us.time());
  return kExitOk;
}

int cmd_cnot(const GlobalOpts& g, int control_state) {
  const auto cfg = load_config(g);
  const auto plan =
      qdsim::cnot_schedule(cfg.caps, cfg.n_total, cfg.tunneling.omega_a,
                           control_state);
  if (g.verbose) {
    std::cerr << "resonant v_a = " << plan.resonant_va
              << ", t_pi = " << plan.t_pi << "\n";
    for (const auto& warn : plan.warnings) std::cerr << "warning: " << warn << "\n";
  }
  const auto table = qdsim::truth_table_for_schedule(
      cfg.caps, cfg.n_total, qdsim::Tunneling{cfg.tunneling.omega_a, 0.0},
      plan.schedule);

  OutputSink sink(g, "cnot");
  qdsim::CsvWriter w(*sink.os);
  w.header({"in_na", "in_nb", "p00", "p01", "p10", "p11"});
  for (int in = 0; in < 4; ++in)
    w.row({static_cast<double>(in >> 1), static_cast<double>(in & 1),
           table(in, 0), table(in, 1), table(in, 2), table(in, 3)});
  return kExitOk;
}

std::array<double, 4> parse_populations(const std::string& spec) {
  std::array<double, 4> p{};
  std::stringstream ss(spec);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 4) throw qdsim::ConfigError("--populations: expected 4 values");
    try {
      p[i++] = std::stod(item);
    } catch (...) {
      throw qdsim::ConfigError("--populations: cannot parse '" + item + "'");
    }
  }
  if (i != 4) throw qdsim::ConfigError("--populations: expected 4 values");
  return p;
}

int cmd_readout(const GlobalOpts& g, const std::string& pop_spec,
                bool linear_model) {
  const auto cfg = load_config(g);
  const auto pops = parse_populations(pop_spec);
  qdsim::SolveOptions opts;
  opts.linear_model = linear_model;
  if (g.verbose) opts.diagnostics = &std::cerr;
  const auto map = qdsim::readout_map(cfg.channel, cfg.readout, pops, opts);

  OutputSink sink(g, "readout");
  qdsim::CsvWriter w(*sink.os);
  w.header({"i_d_00", "i_d_01", "i_d_10", "i_d_11", "i_mean"});
  w.row({map.state_currents[0], map.state_currents[1], map.state_currents[2],
         map.state_currents[3], map.mean_current});
  return kExitOk;
}

int cmd_sweep(const GlobalOpts& g, const std::string& var, double from,
              double to, int points, bool linear_model) {
  const auto cfg = load_config(g);
  if (points < 1) throw qdsim::ConfigError("--points must be >= 1");
  if (var != "vds" && var != "vg" && var != "dvth")
    throw qdsim::ConfigError("--var must be one of vds, vg, dvth");

  OutputSink sink(g, "sweep");
  qdsim::CsvWriter w(*sink.os);
  w.header({var, "i_d_00", "i_d_01", "i_d_10", "i_d_11", "delta_eq8",
            "delta_solver"});
  qdsim::SolveOptions opts;
  opts.linear_model = linear_model;
  if (g.verbose) opts.diagnostics = &std::cerr;

  for (int k = 0; k < points; ++k) {
    const double x =
        points == 1 ? from : from + (to - from) * k / (points - 1.0);
    qdsim::ReadoutSetup setup = cfg.readout;
    if (var == "vds") setup.v_ds = x;
    if (var == "vg") setup.v_gate = x;
    if (var == "dvth") {
      setup.dvth_a[1] = x;
      setup.dvth_b[1] = x;
    }
    // per-state currents with uniform populations (weights irrelevant here)
    const auto map = qdsim::readout_map(cfg.channel, setup,
                                        {0.25, 0.25, 0.25, 0.25}, opts);
    const double vg_eff = setup.v_gate - cfg.channel.v_th();
    const double dv = setup.dvth_a[1];
    double d8 = 0.0, dsolve = 0.0;
    if (dv > 0.0 && dv < vg_eff && setup.v_ds > 0.0) {
      const auto d = qdsim::delta_current_two_qubit(cfg.channel, vg_eff, dv,
                                                    setup.v_ds, opts);
      d8 = linear_model ? 0.0 : d.formula;  // no alpha term, no contrast
      dsolve = d.solver;
    }
    w.row({x, map.state_currents[0], map.state_currents[1],
           map.state_currents[2], map.state_currents[3], d8, dsolve});
  }
  return kExitOk;
}

int cmd_config_print(const GlobalOpts& g) {
  const auto cfg = load_config(g);
  OutputSink sink(g, "config-print");
  *sink.os << cfg.to_json_text();
  return kExitOk;
}

int cmd_config_validate(const GlobalOpts& g) {
  load_config(g);
  std::cerr << "config ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled charge-qubit electrostatics, dynamics and MOSFET "
               "readout simulator"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "device description (JSON)");
  app.add_option("--out", g.out_path,
                 "output CSV path (default stdout); metadata goes to "
                 "<out>.meta.json");
  app.add_option("--units", g.units_flag, "natural|physical (overrides config)")
      ->check(CLI::IsMember({"natural", "physical"}));
  app.add_flag("--verbose", g.verbose, "diagnostics to stderr");

  std::string na = "0:1", nb = "0:1", va = "0", vb_spec = "0";
  auto* energy = app.add_subcommand("energy", "electrostatic energy grid");
  energy->add_option("--na", na, "n_a range (int or min:max)");
  energy->add_option("--nb", nb, "n_b range");
  energy->add_option("--va", va, "V_a grid (value or lo:hi:points)");
  energy->add_option("--vb", vb_spec, "V_b grid");

  std::string sva = "0:1:101";
  double svb = 0.0;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues vs V_a");
  spectrum->add_option("--va", sva, "V_a grid (lo:hi:points)");
  spectrum->add_option("--vb", svb, "fixed V_b");

  std::string state = "00";
  double dt = 0.0;
  bool dissipative = false;
  auto* evolve = app.add_subcommand("evolve", "pulse-schedule evolution");
  evolve->add_option("--state", state, "initial basis state (00|01|10|11)");
  evolve->add_option("--dt", dt, "sample interval (natural units)");
  evolve->add_flag("--dissipation", dissipative,
                   "Bloch evolution with the config's T1/T2");

  int control_state = 1;
  auto* cnot = app.add_subcommand("cnot", "conditional-NOT truth table");
  cnot->add_option("--control-state", control_state,
                   "control charge state selecting the resonance (0|1)")
      ->check(CLI::Range(0, 1));

  std::string pops = "1,0,0,0";
  bool readout_linear = false;
  auto* readout = app.add_subcommand("readout", "per-state channel currents");
  readout->add_option("--populations", pops, "p00,p01,p10,p11 weights");
  readout->add_flag("--linear-model", readout_linear,
                    "drop the quadratic alpha term");

  std::string var = "vds";
  double from = 0.0, to = 0.0;
  int points = 1;
  bool sweep_linear = false;
  auto* sweep = app.add_subcommand("sweep", "readout sweep");
  sweep->add_option("--var", var, "sweep variable: vds|vg|dvth");
  sweep->add_option("--from", from, "start value")->required();
  sweep->add_option("--to", to, "end value")->required();
  sweep->add_option("--points", points, "grid points")->required();
  sweep->add_flag("--linear-model", sweep_linear,
                  "drop the quadratic alpha term");

  auto* config = app.add_subcommand("config", "configuration utilities");
  config->require_subcommand(1);
  auto* cfg_print = config->add_subcommand("print", "canonical config dump");
  auto* cfg_validate = config->add_subcommand("validate", "schema check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (energy->parsed()) return cmd_energy(g, na, nb, va, vb_spec);
    if (spectrum->parsed()) return cmd_spectrum(g, sva, svb);
    if (evolve->parsed()) return cmd_evolve(g, state, dt, dissipative);
    if (cnot->parsed()) return cmd_cnot(g, control_state);
    if (readout->parsed()) return cmd_readout(g, pops, readout_linear);
    if (sweep->parsed()) return cmd_sweep(g, var, from, to, points, sweep_linear);
    if (config->parsed()) {
      if (cfg_print->parsed()) return cmd_config_print(g);
      if (cfg_validate->parsed()) return cmd_config_validate(g);
    }
    std::cerr << "no subcommand\n";
    return kExitConfig;
  } catch (const qdsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const qdsim::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const qdsim::ValidityError& e) {
    std::cerr << "model validity error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
