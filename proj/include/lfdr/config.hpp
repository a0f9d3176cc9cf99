#pragma once

#include <stdexcept>
#include <string>

#include "lfdr/sim.hpp"

namespace lfdr {

// Schema or semantic problem in an experiment config. `semantic` separates
// structurally valid configs that request an impossible run (maps to a
// different CLI exit code).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, bool semantic_error = false)
      : std::runtime_error(message), semantic_(semantic_error) {}
  bool semantic() const { return semantic_; }

 private:
  bool semantic_ = false;
};

struct NamedConfig {
  std::string name;
  ExperimentConfig experiment;
};

// Parses and validates a config document (schema_version 1). Unknown keys
// anywhere are rejected. Throws ConfigError; JSON syntax errors surface the
// parser's line/column diagnostics.
NamedConfig parse_config_text(const std::string& text);

// Reads the file and forwards to parse_config_text.
NamedConfig load_config(const std::string& path);

}  // namespace lfdr
