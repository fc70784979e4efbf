#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qres/config.hpp"
#include "qres_cli/cli.hpp"

namespace qres::cli {

struct Produced {
  std::vector<std::string> files;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::string summary;
  bool failed = false;  // data written, but the run did not meet its own checks
};

Produced temperature(const RunConfig& cfg, const Request& req);
Produced thermo(const RunConfig& cfg, const Request& req);
Produced linear_response(const RunConfig& cfg, const Request& req);
Produced cumulants(const RunConfig& cfg, const Request& req);
Produced lr_cumulants(const RunConfig& cfg, const Request& req);
Produced distribution(const RunConfig& cfg, const Request& req);
Produced verify_oracle(const RunConfig& cfg, const Request& req);

}  // namespace qres::cli
