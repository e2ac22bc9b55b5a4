#pragma once

// Experiment configuration files.
//
// A config is a flat text file of `key = value` lines; `#` starts a comment.
// Rational quantities are written as "p/q" (decimals are rejected), vectors
// as comma-separated rationals or a preset name, and lists of vectors are
// separated by ';'. The same keys, as a JSON object of strings, are accepted
// so that the config echo inside report.json parses back to the same hash.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "badlab/experiment.hpp"

namespace badlab::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ParsedConfig {
  ExperimentConfig config;
  /// Normalized value of every key, defaults included.
  std::map<std::string, std::string> echo;
  std::optional<Rat> gamma;
  std::string hash;
};

/// Canonical key/value lines -> FNV-1a 64, as 16 hex digits.
std::string config_hash(const std::map<std::string, std::string>& echo);

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_map(const std::map<std::string, std::string>& raw);
/// Reads a key-value file, or a JSON file (a report's "config" object or a
/// plain object of strings).
ParsedConfig parse_config(const std::filesystem::path& path);

}  // namespace badlab::cli
