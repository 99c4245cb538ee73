#include "fwer/manifest.hpp"

#include <cstdio>

#include <json.hpp>

namespace fwer {

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["schema"] = schema;
  j["parameters"] = parameters;  // std::map keeps key order deterministic
  if (seed) j["seed"] = *seed;
  j["tool_version"] = tool_version;
  return j.dump();
}

std::string RunManifest::csv_comment() const { return "# manifest " + to_json(); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_bool(bool v) { return v ? "1" : "0"; }

}  // namespace fwer
