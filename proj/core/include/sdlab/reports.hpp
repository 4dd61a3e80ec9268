#pragma once

// Serialization of check results, convergence reports and trajectories:
// JSON for reports, CSV for tables, JSON-lines for trajectories. Output is
// a pure function of the input (no timestamps), so reruns are byte-identical.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdlab/convergence.hpp"
#include "sdlab/drift_forms.hpp"
#include "sdlab/markov.hpp"
#include "sdlab/spectral.hpp"

namespace sdlab {

struct LevelCheck {
  int level = 0;
  std::size_t vertices = 0;
  SmallnessReport smallness;
  ConditionIII condition_III;
  std::optional<SandwichReport> sandwich;  // present when constants exist
  std::optional<SDReport> sd;
  RateReport rates;
  double detailed_balance_violation = 0.0;
  bool assumption_satisfied = false;
};

struct CheckReport {
  std::string structure;
  std::string assumption;  // "A" or "B"
  bool assumed_dense = true;
  double diam_proxy = 0.0;
  int working_level = 0;
  std::vector<LevelCheck> levels;
  bool passed = false;
  std::string failure;  // names the violated condition when !passed
};

std::string to_json(const CheckReport& report);
std::string to_json(std::span<const ConvergenceReport> reports);
std::string to_json(std::span<const PathLawReport> reports);
std::string to_json(const EnergyProfile& profile);

/// "level,error" rows.
std::string to_csv(const ConvergenceReport& report);
/// "label,level,error" rows for several reports of one quantity.
std::string to_csv(std::span<const ConvergenceReport> reports);
/// "function,level,mc_mean,standard_error,exact,z_score,reference,error" rows.
std::string to_csv(std::span<const PathLawReport> reports);

/// One line (no trailing newline): {"seed":..,"index":..,"horizon":..,"jump_times":[..],"states":[..]}.
std::string to_json_line(const Trajectory& path);

/// Shortest round-trip decimal form of a double ("nan"/"inf" spelled out).
std::string format_number(double v);

}  // namespace sdlab
