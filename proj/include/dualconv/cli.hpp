#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace dualconv::cli {

struct Options {
  std::string command;
  nlohmann::json config;
  std::optional<std::uint64_t> seed;
  std::optional<int> degree;
  std::optional<double> tol;
  bool csv = false;
};

struct Outcome {
  nlohmann::json report;  // includes "wall_clock_seconds"
  std::string csv;        // filled when Options::csv and the command has a table
  int exit_code = 0;
};

/// Exit codes: 0 pass (and always for check-* commands), 1 failed checks,
/// 2 configuration error, 3 computation error.
Outcome run(const Options& options);

/// Report body without the wall-clock field, serialized deterministically.
std::string canonical_body(const nlohmann::json& report);

/// FNV-1a of the canonical configuration dump.
std::string config_hash(const nlohmann::json& config);

}  // namespace dualconv::cli
