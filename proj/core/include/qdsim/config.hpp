#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "qdsim/capacitance.hpp"
#include "qdsim/dynamics.hpp"
#include "qdsim/mosfet.hpp"

namespace qdsim {

enum class UnitSystem { natural, physical };

/// Full device description, loaded from a versioned JSON document
/// (schema tag "qdsim-device/1").  All stored quantities are in natural
/// units; `units` only selects the presentation of emitted tables.
/// See the repository README for the field-by-field reference.
struct DeviceConfig {
  CapacitanceSet caps = CapacitanceSet::symmetric(0.01, 1.0, 1.0, 1.0);
  double n_total = 0.0;
  Tunneling tunneling;
  double t1 = 0.0;  ///< natural time units
  double t2 = 0.0;
  ChannelParams channel;
  ReadoutSetup readout;
  std::optional<PulseSchedule> schedule;
  UnitSystem units = UnitSystem::natural;
  double weak_coupling_threshold = 0.1;

  static DeviceConfig from_json_text(const std::string& text);
  static DeviceConfig load(const std::filesystem::path& path);

  /// Canonical serialization: sorted keys, resolved capacitances, natural
  /// units.  Re-parsing the output reproduces the configuration exactly.
  std::string to_json_text() const;
};

}  // namespace qdsim
