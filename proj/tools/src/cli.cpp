#include "qres_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qres/errors.hpp"
#include "subcommands.hpp"

namespace qres::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RunConfig harmonic_config(double amplitude, double T_e, double gamma, double periods, int samples) {
  RunConfig c;
  c.system = {1.0, gamma, T_e};
  c.drive.kind = DriveKind::harmonic;
  c.drive.amplitude = amplitude;
  c.drive.period = kTwoPi / 0.1;
  c.grid = {0.0, periods * c.drive.period, 0.5, samples, 0};
  return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::config, "cannot open '" + path.string() + "' for writing");
  f << text;
}

int exit_code(ErrorKind kind) { return kind == ErrorKind::config ? 2 : 1; }

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"temperature", "thermo", "linear-response", "cumulants",
                                                 "lr-cumulants", "distribution", "verify-oracle"};
  return names;
}

RunConfig default_config(const std::string& subcommand) {
  if (subcommand == "temperature") {
    RunConfig c;
    c.system = {1.0, 0.05, 1.5};
    c.drive.kind = DriveKind::square;
    c.drive.amplitude = 0.1;
    c.drive.period = kTwoPi / 0.1;
    c.grid = {0.0, 2.0 * c.drive.period, 0.5, 801, 0};
    return c;
  }
  if (subcommand == "thermo") {
    RunConfig c = default_config("temperature");
    c.drive.amplitude = 0.7;
    return c;
  }
  if (subcommand == "linear-response") return harmonic_config(0.1, 1.5, 0.1, 1.0, 401);
  if (subcommand == "cumulants") return harmonic_config(0.6, 4.0, 0.1, 6.0, 1201);
  if (subcommand == "lr-cumulants") return harmonic_config(0.01, 4.0, 0.1, 6.0, 1201);
  if (subcommand == "distribution") {
    RunConfig c = harmonic_config(0.6, 4.0, 0.1, 5.85, 2);
    return c;
  }
  if (subcommand == "verify-oracle") {
    RunConfig c = harmonic_config(0.3, 1.0, 0.1, 1.0, 21);
    return c;
  }
  throw Error(ErrorKind::config, "unknown subcommand '" + subcommand + "'");
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::numerical, "SHA-256 digest failed");
  }
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

Outcome run(const Request& req) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig defaults = default_config(req.subcommand);
  const RunConfig cfg = req.params ? load_config(*req.params, defaults) : defaults;
  validate(cfg);

  std::error_code ec;
  std::filesystem::create_directories(req.out, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output directory '" + req.out.string() + "'");

  Produced produced;
  const auto& s = req.subcommand;
  if (s == "temperature") produced = temperature(cfg, req);
  else if (s == "thermo") produced = thermo(cfg, req);
  else if (s == "linear-response") produced = linear_response(cfg, req);
  else if (s == "cumulants") produced = cumulants(cfg, req);
  else if (s == "lr-cumulants") produced = lr_cumulants(cfg, req);
  else if (s == "distribution") produced = distribution(cfg, req);
  else if (s == "verify-oracle") produced = verify_oracle(cfg, req);
  else throw Error(ErrorKind::config, "unknown subcommand '" + s + "'");

  const std::string canonical = to_json(cfg);
  ordered_json manifest;
  manifest["subcommand"] = s;
  manifest["version"] = QRES_VERSION_STRING;
  manifest["config_sha256"] = sha256_hex(canonical);
  manifest["config"] = nlohmann::json::parse(canonical);
  manifest["options"] = {{"order", req.order}, {"m_max", req.m_max}};
  if (req.at_time) manifest["options"]["at_time"] = *req.at_time;
  manifest["advisories"] = advisories(cfg.system);
  manifest["results"] = produced.results;
  manifest["files"] = produced.files;
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(req.out / "manifest.json", manifest.dump(2) + "\n");

  if (produced.failed) throw Error(ErrorKind::numerical, s + ": " + produced.summary);
  Outcome out;
  out.files = produced.files;
  out.files.push_back("manifest.json");
  out.summary = produced.summary;
  return out;
}

int main(int argc, char** argv) {
  CLI::App app{"Driven quantum resonator: thermodynamics and photon counting statistics", "qres"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", QRES_VERSION_STRING);

  Request req;
  std::string params;
  std::string out = ".";
  double at_time = 0.0;
  bool seedless = false;
  app.add_option("--params", params, "JSON configuration file");
  app.add_option("--out", out, "Output directory");
  app.add_option("--order", req.order, "Highest cumulant order (cumulants)");
  auto* at = app.add_option("--at-time", at_time, "Distribution time (distribution)");
  app.add_option("--m-max", req.m_max, "Half-width of the m window (distribution)");
  app.add_flag("--seedless", seedless, "Reserved; nothing here uses random numbers");

  for (const auto& name : subcommands()) app.add_subcommand(name, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  req.subcommand = app.get_subcommands().front()->get_name();
  req.out = out;
  if (!params.empty()) req.params = params;
  if (at->count() > 0) req.at_time = at_time;

  try {
    if (seedless) throw Error(ErrorKind::config, "--seedless is reserved: no computation here draws random numbers");
    const Outcome outcome = run(req);
    std::cout << req.subcommand << ": " << outcome.summary << "\n";
    for (const auto& f : outcome.files) std::cout << "  " << (req.out / f).string() << "\n";
    return 0;
  } catch (const Error& e) {
    ordered_json report;
    report["error"] = {{"kind", std::string(to_string(e.kind()))},
                       {"message", e.what()},
                       {"subcommand", req.subcommand}};
    std::cerr << report.dump(2) << "\n";
    std::error_code ec;
    if (std::filesystem::is_directory(req.out, ec)) {
      try {
        write_text(req.out / "error.json", report.dump(2) + "\n");
      } catch (const Error&) {
      }
    }
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    ordered_json report;
    report["error"] = {{"kind", "internal"}, {"message", e.what()}, {"subcommand", req.subcommand}};
    std::cerr << report.dump(2) << "\n";
    return 1;
  }
}

}  // namespace qres::cli
