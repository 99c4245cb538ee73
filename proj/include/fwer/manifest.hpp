#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>

// Every output artifact embeds a manifest of the resolved parameters, enough
// to re-run the command bit-identically with the same binary. Volatile data
// (wall-clock time, worker count) is deliberately kept out so re-runs produce
// byte-identical files; timestamps go to the log stream instead.

namespace fwer {

struct RunManifest {
  std::string command;
  std::string schema;  // e.g. "fwer.exact.v1"
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
  std::string tool_version;

  std::string to_json() const;
  // "# manifest <json>" comment line placed at the top of CSV artifacts.
  std::string csv_comment() const;
};

// Shortest-exact serialization helpers shared by every writer: doubles carry
// 17 significant digits so parsing them back reproduces the bits.
std::string format_double(double v);
std::string format_bool(bool v);

}  // namespace fwer
