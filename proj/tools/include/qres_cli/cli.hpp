#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qres/config.hpp"

namespace qres::cli {

struct Request {
  std::string subcommand;
  std::optional<std::filesystem::path> params;
  std::filesystem::path out = ".";
  int order = 4;
  std::optional<double> at_time;
  int m_max = 150;
};

struct Outcome {
  std::vector<std::string> files;  // relative to the output directory
  std::string summary;             // one line for stdout
};

const std::vector<std::string>& subcommands();

/// Configuration used when no --params file is given, or for keys it omits.
RunConfig default_config(const std::string& subcommand);

/// Runs one subcommand and writes its data files plus manifest.json into
/// request.out. Throws qres::Error on failure.
Outcome run(const Request& request);

/// Full entry point: parses argv, runs, and maps failures to a JSON error
/// report on stderr (and error.json in the output directory when possible).
int main(int argc, char** argv);

/// Lower-case hex SHA-256 of `text`.
std::string sha256_hex(const std::string& text);

}  // namespace qres::cli
