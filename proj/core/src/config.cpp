#include "qres/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qres/errors.hpp"

namespace qres {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorKind::config, "'" + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw Error(ErrorKind::config, "unknown key '" + where + "." + key + "'");
    }
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    throw Error(ErrorKind::config, "'" + where + "." + key + "' must be a number");
  }
  return v.get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorKind::config, "'" + where + "." + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace

DriveWaveform RunConfig::make_drive() const {
  switch (drive.kind) {
    case DriveKind::constant:
      return DriveWaveform::constant(system.omega_bar);
    case DriveKind::square:
      return DriveWaveform::square(system.omega_bar, drive.amplitude, drive.period, drive.phase);
    case DriveKind::sawtooth:
      return DriveWaveform::sawtooth(system.omega_bar, drive.amplitude, drive.period, drive.phase);
    case DriveKind::harmonic:
      return DriveWaveform::harmonic(system.omega_bar, drive.amplitude, drive.period, drive.phase);
    case DriveKind::tabulated:
      return DriveWaveform::tabulated(drive.knots);
  }
  throw Error(ErrorKind::config, "unreachable drive kind");
}

RunConfig parse_config(const std::string& json_text, const RunConfig& defaults) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, {"system", "drive", "grid"}, "<root>");

  RunConfig cfg = defaults;
  if (doc.contains("system")) {
    const json& s = doc.at("system");
    reject_unknown(s, {"omega_bar", "gamma", "T_e"}, "system");
    cfg.system.omega_bar = get_number(s, "omega_bar", cfg.system.omega_bar, "system");
    cfg.system.gamma = get_number(s, "gamma", cfg.system.gamma, "system");
    cfg.system.T_e = get_number(s, "T_e", cfg.system.T_e, "system");
  }
  if (doc.contains("drive")) {
    const json& d = doc.at("drive");
    reject_unknown(d, {"kind", "amplitude", "period", "phase", "knots"}, "drive");
    if (d.contains("kind")) {
      if (!d.at("kind").is_string()) throw Error(ErrorKind::config, "'drive.kind' must be a string");
      cfg.drive.kind = drive_kind_from_string(d.at("kind").get<std::string>());
    }
    cfg.drive.amplitude = get_number(d, "amplitude", cfg.drive.amplitude, "drive");
    cfg.drive.period = get_number(d, "period", cfg.drive.period, "drive");
    cfg.drive.phase = get_number(d, "phase", cfg.drive.phase, "drive");
    if (d.contains("knots")) {
      const json& ks = d.at("knots");
      if (!ks.is_array()) throw Error(ErrorKind::config, "'drive.knots' must be an array");
      cfg.drive.knots.clear();
      for (const json& k : ks) {
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
          throw Error(ErrorKind::config, "each knot must be a [time, frequency] pair");
        }
        cfg.drive.knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
    }
  }
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    reject_unknown(g, {"t_start", "t_end", "dt_max", "n_samples", "relax_periods"}, "grid");
    cfg.grid.t_start = get_number(g, "t_start", cfg.grid.t_start, "grid");
    cfg.grid.t_end = get_number(g, "t_end", cfg.grid.t_end, "grid");
    cfg.grid.dt_max = get_number(g, "dt_max", cfg.grid.dt_max, "grid");
    cfg.grid.n_samples = get_int(g, "n_samples", cfg.grid.n_samples, "grid");
    cfg.grid.relax_periods = get_int(g, "relax_periods", cfg.grid.relax_periods, "grid");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const RunConfig& defaults) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), defaults);
}

std::string to_json(const RunConfig& cfg, int indent) {
  json doc;
  doc["system"] = {{"omega_bar", cfg.system.omega_bar},
                   {"gamma", cfg.system.gamma},
                   {"T_e", cfg.system.T_e}};
  json drive = {{"kind", to_string(cfg.drive.kind)},
                {"amplitude", cfg.drive.amplitude},
                {"period", cfg.drive.period},
                {"phase", cfg.drive.phase}};
  if (cfg.drive.kind == DriveKind::tabulated) {
    json knots = json::array();
    for (const auto& k : cfg.drive.knots) knots.push_back({k.t, k.omega});
    drive["knots"] = knots;
  }
  doc["drive"] = drive;
  doc["grid"] = {{"t_start", cfg.grid.t_start},
                 {"t_end", cfg.grid.t_end},
                 {"dt_max", cfg.grid.dt_max},
                 {"n_samples", cfg.grid.n_samples},
                 {"relax_periods", cfg.grid.relax_periods}};
  return doc.dump(indent);
}

void validate(const RunConfig& cfg) {
  validate(cfg.system);
  validate(cfg.grid);
  (void)cfg.make_drive();
}

}  // namespace qres
