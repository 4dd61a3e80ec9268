#pragma once

// JSON configuration for user-defined structures and drifts. Formats are
// documented in docs/structure_config.md and docs/drift_config.md.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sdlab/drift_forms.hpp"
#include "sdlab/hierarchy.hpp"
#include "sdlab/pcf_structure.hpp"

namespace sdlab {

struct StructureConfig {
  std::string name;
  SelfSimilarStructure structure;
  FormParameters parameters;
  /// V_* = ∪ V_n is dense in X. Recorded, not verified.
  bool assumed_dense = true;
};

/// Built-in structures by name ("sg"). Throws ConfigError for unknown names.
StructureConfig builtin_structure(std::string_view name);

/// Throws ConfigError for malformed JSON, missing keys or invalid values.
StructureConfig parse_structure_config(std::string_view json_text);
StructureConfig load_structure_config(const std::filesystem::path& path);

/// A built-in name or a path to a JSON file.
StructureConfig resolve_structure(const std::string& name_or_path);

struct DriftConfig {
  DriftModel model;
  std::optional<double> delta;
};

DriftConfig parse_drift_config(std::string_view json_text);
DriftConfig load_drift_config(const std::filesystem::path& path);

/// Whole file as a string; throws ConfigError if it cannot be read.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace sdlab
