#pragma once

#include <filesystem>
#include <string>

#include "qres/model.hpp"

namespace qres {

/// Drive as written in a configuration file, before omega_bar is attached.
struct DriveSpec {
  DriveKind kind = DriveKind::constant;
  double amplitude = 0.0;
  double period = 0.0;
  double phase = 0.0;
  std::vector<Knot> knots;

  friend bool operator==(const DriveSpec&, const DriveSpec&) = default;
};

/// One configuration document: {"system": {...}, "drive": {...}, "grid": {...}}.
struct RunConfig {
  SystemParams system;
  DriveSpec drive;
  SimulationGrid grid;

  DriveWaveform make_drive() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses a JSON document. Keys absent from the document keep the values in
/// `defaults`; unknown keys and wrongly typed values throw Error{config}.
RunConfig parse_config(const std::string& json_text, const RunConfig& defaults = {});
RunConfig load_config(const std::filesystem::path& path, const RunConfig& defaults = {});

/// Canonical JSON (sorted keys, shortest round-trip doubles).
std::string to_json(const RunConfig& config, int indent = 2);

/// Validates system, drive, and grid together.
void validate(const RunConfig& config);

}  // namespace qres
