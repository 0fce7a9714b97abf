#include "qdsim/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "qdsim/errors.hpp"
#include "qdsim/units.hpp"

namespace qdsim {

namespace {

using nlohmann::json;

constexpr const char* kSchemaTag = "qdsim-device/1";

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config field '" + path + "': " + msg);
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_or(const json& parent, const char* key, double fallback,
                 const std::string& path) {
  if (!parent.contains(key)) return fallback;
  return require_number(parent.at(key), path + "." + key);
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& path) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      fail(path.empty() ? key : path + "." + key, "unknown field");
}

// a capacitor entry is either a value in aF or a geometry object
double capacitor_value(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object()) {
    check_keys(j, {"radius_nm", "gap_nm", "eps_ox", "eps_si"}, path);
    DotGeometry g;
    if (!j.contains("radius_nm") || !j.contains("gap_nm"))
      fail(path, "geometry needs radius_nm and gap_nm");
    g.radius_nm = require_number(j.at("radius_nm"), path + ".radius_nm");
    g.gap_nm = require_number(j.at("gap_nm"), path + ".gap_nm");
    g.eps_ox = number_or(j, "eps_ox", 4.0, path);
    g.eps_si = number_or(j, "eps_si", 12.0, path);
    try {
      return estimate_capacitance(g);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a capacitance in aF or a geometry object");
}

CapacitanceSet parse_capacitances(const json& j) {
  if (!j.is_object()) fail("capacitances", "expected an object");
  const bool has_full = j.contains("c1");
  if (has_full) {
    std::array<double, 10> c{};
    for (int i = 1; i <= 10; ++i) {
      const std::string key = "c" + std::to_string(i);
      if (!j.contains(key)) fail("capacitances." + key, "missing");
      c[static_cast<std::size_t>(i - 1)] =
          capacitor_value(j.at(key), "capacitances." + key);
    }
    check_keys(j, {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10"},
               "capacitances");
    try {
      return CapacitanceSet::from_values(c);
    } catch (const std::invalid_argument& e) {
      fail("capacitances", e.what());
    }
  }
  check_keys(j, {"c3", "c5", "c6", "c7"}, "capacitances");
  for (const char* key : {"c3", "c5", "c6", "c7"})
    if (!j.contains(key)) fail(std::string("capacitances.") + key, "missing");
  try {
    return CapacitanceSet::symmetric(
        capacitor_value(j.at("c3"), "capacitances.c3"),
        capacitor_value(j.at("c5"), "capacitances.c5"),
        capacitor_value(j.at("c6"), "capacitances.c6"),
        capacitor_value(j.at("c7"), "capacitances.c7"));
  } catch (const std::invalid_argument& e) {
    fail("capacitances", e.what());
  }
}

}  // namespace

DeviceConfig DeviceConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("top level must be an object");
  check_keys(j,
             {"schema", "units", "capacitances", "n_total", "tunneling",
              "dissipation", "channel", "readout", "schedule",
              "weak_coupling_threshold"},
             "");
  if (!j.contains("schema") || !j.at("schema").is_string() ||
      j.at("schema").get<std::string>() != kSchemaTag)
    throw ConfigError(std::string("config field 'schema': expected \"") +
                      kSchemaTag + "\"");
  if (!j.contains("capacitances")) fail("capacitances", "missing");

  DeviceConfig cfg;
  cfg.caps = parse_capacitances(j.at("capacitances"));

  if (j.contains("units")) {
    const auto& u = j.at("units");
    if (!u.is_string()) fail("units", "expected \"natural\" or \"physical\"");
    const std::string s = u.get<std::string>();
    if (s == "natural")
      cfg.units = UnitSystem::natural;
    else if (s == "physical")
      cfg.units = UnitSystem::physical;
    else
      fail("units", "expected \"natural\" or \"physical\"");
  }

  cfg.n_total = number_or(j, "n_total", 0.0, "");

  if (j.contains("tunneling")) {
    const auto& t = j.at("tunneling");
    if (!t.is_object()) fail("tunneling", "expected an object");
    check_keys(t, {"omega_a", "omega_b"}, "tunneling");
    cfg.tunneling.omega_a = number_or(t, "omega_a", 0.0, "tunneling");
    cfg.tunneling.omega_b = number_or(t, "omega_b", 0.0, "tunneling");
    if (cfg.tunneling.omega_a < 0.0 || cfg.tunneling.omega_b < 0.0)
      fail("tunneling", "amplitudes must be >= 0");
  }

  const double default_t = units::seconds_to_natural(1e-7);
  cfg.t1 = default_t;
  cfg.t2 = default_t;
  if (j.contains("dissipation")) {
    const auto& d = j.at("dissipation");
    if (!d.is_object()) fail("dissipation", "expected an object");
    check_keys(d, {"t1", "t2", "t1_s", "t2_s"}, "dissipation");
    if (d.contains("t1") && d.contains("t1_s"))
      fail("dissipation", "give t1 (natural) or t1_s (seconds), not both");
    if (d.contains("t2") && d.contains("t2_s"))
      fail("dissipation", "give t2 (natural) or t2_s (seconds), not both");
    if (d.contains("t1")) cfg.t1 = require_number(d.at("t1"), "dissipation.t1");
    if (d.contains("t1_s"))
      cfg.t1 = units::seconds_to_natural(
          require_number(d.at("t1_s"), "dissipation.t1_s"));
    if (d.contains("t2")) cfg.t2 = require_number(d.at("t2"), "dissipation.t2");
    if (d.contains("t2_s"))
      cfg.t2 = units::seconds_to_natural(
          require_number(d.at("t2_s"), "dissipation.t2_s"));
    if (!(cfg.t1 > 0.0) || !(cfg.t2 > 0.0))
      fail("dissipation", "t1 and t2 must be > 0");
    if (cfg.t2 > 2.0 * cfg.t1) fail("dissipation", "t2 must be <= 2*t1");
  }

  if (j.contains("channel")) {
    const auto& c = j.at("channel");
    if (!c.is_object()) fail("channel", "expected an object");
    check_keys(c,
               {"width", "mobility", "c_ox", "segment_length", "phi_b",
                "q_depletion", "v_flat_band"},
               "channel");
    cfg.channel.width = number_or(c, "width", 1.0, "channel");
    cfg.channel.mobility = number_or(c, "mobility", 1.0, "channel");
    cfg.channel.c_ox = number_or(c, "c_ox", 1.0, "channel");
    cfg.channel.segment_length = number_or(c, "segment_length", 1.0, "channel");
    cfg.channel.phi_b = number_or(c, "phi_b", 0.25, "channel");
    cfg.channel.q_depletion = number_or(c, "q_depletion", 0.0, "channel");
    cfg.channel.v_flat_band = number_or(c, "v_flat_band", 0.0, "channel");
    try {
      cfg.channel.validate();
    } catch (const std::invalid_argument& e) {
      fail("channel", e.what());
    }
  }

  if (j.contains("readout")) {
    const auto& r = j.at("readout");
    if (!r.is_object()) fail("readout", "expected an object");
    check_keys(r, {"v_gate", "v_ds", "dvth_a", "dvth_b"}, "readout");
    cfg.readout.v_gate = number_or(r, "v_gate", 0.0, "readout");
    cfg.readout.v_ds = number_or(r, "v_ds", 0.0, "readout");
    auto shifts = [&](const char* key) -> std::array<double, 2> {
      if (!r.contains(key)) return {0.0, 0.0};
      const auto& a = r.at(key);
      const std::string path = std::string("readout.") + key;
      if (!a.is_array() || a.size() != 2)
        fail(path, "expected [shift for n=0, shift for n=1]");
      std::array<double, 2> out{require_number(a.at(0), path + "[0]"),
                                require_number(a.at(1), path + "[1]")};
      if (out[0] < 0.0 || out[1] < 0.0) fail(path, "shifts must be >= 0");
      return out;
    };
    cfg.readout.dvth_a = shifts("dvth_a");
    cfg.readout.dvth_b = shifts("dvth_b");
  }

  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    if (!s.is_array() || s.empty()) fail("schedule", "expected a non-empty array");
    PulseSchedule sched;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string path = "schedule[" + std::to_string(i) + "]";
      const auto& seg = s.at(i);
      if (!seg.is_object()) fail(path, "expected an object");
      check_keys(seg, {"va", "vb", "duration"}, path);
      PulseSegment ps;
      ps.bias.va = number_or(seg, "va", 0.0, path);
      ps.bias.vb = number_or(seg, "vb", 0.0, path);
      if (!seg.contains("duration")) fail(path + ".duration", "missing");
      ps.duration = require_number(seg.at("duration"), path + ".duration");
      sched.segments.push_back(ps);
    }
    try {
      sched.validate();
    } catch (const std::invalid_argument& e) {
      fail("schedule", e.what());
    }
    cfg.schedule = std::move(sched);
  }

  cfg.weak_coupling_threshold =
      number_or(j, "weak_coupling_threshold", 0.1, "");
  if (!(cfg.weak_coupling_threshold > 0.0))
    fail("weak_coupling_threshold", "must be > 0");

  return cfg;
}

DeviceConfig DeviceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string DeviceConfig::to_json_text() const {
  json j;
  j["schema"] = kSchemaTag;
  j["units"] = units == UnitSystem::natural ? "natural" : "physical";
  json caps_j;
  for (int i = 1; i <= 10; ++i)
    caps_j["c" + std::to_string(i)] = caps.c(i);
  j["capacitances"] = caps_j;
  j["n_total"] = n_total;
  j["tunneling"] = {{"omega_a", tunneling.omega_a},
                    {"omega_b", tunneling.omega_b}};
  j["dissipation"] = {{"t1", t1}, {"t2", t2}};
  j["channel"] = {{"width", channel.width},
                  {"mobility", channel.mobility},
                  {"c_ox", channel.c_ox},
                  {"segment_length", channel.segment_length},
                  {"phi_b", channel.phi_b},
                  {"q_depletion", channel.q_depletion},
                  {"v_flat_band", channel.v_flat_band}};
  j["readout"] = {{"v_gate", readout.v_gate},
                  {"v_ds", readout.v_ds},
                  {"dvth_a", readout.dvth_a},
                  {"dvth_b", readout.dvth_b}};
  if (schedule) {
    json arr = json::array();
    for (const auto& seg : schedule->segments)
      arr.push_back({{"va", seg.bias.va},
                     {"vb", seg.bias.vb},
                     {"duration", seg.duration}});
    j["schedule"] = arr;
  }
  j["weak_coupling_threshold"] = weak_coupling_threshold;
  return j.dump(2) + "\n";
}

}  // namespace qdsim
