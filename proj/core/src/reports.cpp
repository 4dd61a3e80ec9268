#include "sdlab/reports.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace sdlab {

namespace {

using nlohmann::ordered_json;

// JSON has no infinities; they appear as strings so the value stays visible.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

ordered_json to_object(const SmallnessReport& r) {
  ordered_json j;
  j["diam_proxy"] = num(r.diam_proxy);
  j["condition_I"] = {{"drift_energy", num(r.condition_I.drift_energy)},
                      {"threshold", num(r.condition_I.threshold)},
                      {"margin", num(r.condition_I.margin)},
                      {"satisfied", r.condition_I.satisfied}};
  j["condition_II"] = {{"max_energy", num(r.condition_II.max_energy)},
                       {"argmax", r.condition_II.argmax},
                       {"threshold", num(r.condition_II.threshold)},
                       {"margin", num(r.condition_II.margin)},
                       {"satisfied", r.condition_II.satisfied}};
  if (r.constants) {
    j["constants"] = {{"delta", num(r.constants->delta)},
                      {"s", num(r.constants->s)},
                      {"t", num(r.constants->t)},
                      {"lambda", num(r.constants->lambda)},
                      {"s_lower", num(r.constants->s_lower)}};
  } else {
    j["constants"] = nullptr;
  }
  j["caveat"] = r.caveat;
  return j;
}

ordered_json to_object(const LevelCheck& c) {
  ordered_json j;
  j["level"] = c.level;
  j["vertices"] = c.vertices;
  j["smallness"] = to_object(c.smallness);
  j["condition_III"] = {{"components", c.condition_III.components},
                        {"boundary_in_vertices", c.condition_III.boundary_in_vertices},
                        {"satisfied", c.condition_III.satisfied},
                        {"note", c.condition_III.note}};
  if (c.sandwich) {
    const auto& s = *c.sandwich;
    j["sandwich"] = {{"passed", s.passed},
                     {"draws", s.draws},
                     {"worst_lower_slack", num(s.worst_lower_slack)},
                     {"worst_upper_slack", num(s.worst_upper_slack)},
                     {"ratio_min", num(s.worst_ratio_low)},
                     {"ratio_max", num(s.worst_ratio_high)},
                     {"drift_bound_passed", s.drift_bound_passed},
                     {"worst_drift_bound_slack", num(s.worst_drift_bound_slack)}};
  } else {
    j["sandwich"] = nullptr;
  }
  if (c.sd) {
    const auto& s = *c.sd;
    ordered_json violations = ordered_json::array();
    for (const auto& [x, y] : s.edges.violations) violations.push_back({x, y});
    j["sd_axioms"] = {{"passed", s.passed()},
                      {"draws", s.draws},
                      {"sd1", s.sd1},
                      {"sd1_min_ratio", num(s.sd1_min)},
                      {"sd3", s.sd3},
                      {"sector_empirical", num(s.sector_empirical)},
                      {"sector_bound", num(s.sector_bound)},
                      {"sd4", s.sd4},
                      {"sd4_min", num(s.sd4_min)},
                      {"edge_min_markov", num(s.edges.min_markov)},
                      {"edge_min_rate", num(s.edges.min_rate)},
                      {"edge_violations", violations}};
  } else {
    j["sd_axioms"] = nullptr;
  }
  ordered_json negative = ordered_json::array();
  for (const auto& v : c.rates.negative) negative.push_back({v.from, v.to, num(v.rate)});
  j["rates"] = {{"valid", c.rates.valid()}, {"negative", negative}};
  j["detailed_balance_violation"] = num(c.detailed_balance_violation);
  j["assumption_satisfied"] = c.assumption_satisfied;
  return j;
}

ordered_json to_object(const ConvergenceReport& r) {
  ordered_json j;
  j["quantity"] = std::string(to_string(r.quantity));
  if (!r.label.empty()) j["label"] = r.label;
  j["reference_level"] = r.reference_level;
  j["levels"] = r.levels;
  ordered_json errors = ordered_json::array();
  for (double e : r.errors) errors.push_back(num(e));
  j["errors"] = errors;
  j["non_increasing_from"] = r.non_increasing_from;
  j["monotone"] = r.monotone();
  j["final_to_initial"] = r.final_to_initial ? num(*r.final_to_initial) : ordered_json(nullptr);
  if (!r.banner.empty()) j["banner"] = r.banner;
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_json(const CheckReport& r) {
  ordered_json j;
  j["structure"] = r.structure;
  j["assumption"] = r.assumption;
  j["assumed_dense"] = r.assumed_dense;
  j["diam_proxy"] = num(r.diam_proxy);
  j["working_level"] = r.working_level;
  j["passed"] = r.passed;
  j["failure"] = r.failure;
  ordered_json levels = ordered_json::array();
  for (const auto& c : r.levels) levels.push_back(to_object(c));
  j["levels"] = levels;
  return j.dump(2) + "\n";
}

std::string to_json(std::span<const ConvergenceReport> reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_object(r));
  return arr.dump(2) + "\n";
}

std::string to_json(std::span<const PathLawReport> reports) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    auto j = to_object(r.summary);
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.rows) {
      rows.push_back({{"level", row.level},
                      {"mc_mean", num(row.mc_mean)},
                      {"standard_error", num(row.standard_error)},
                      {"exact", num(row.exact)},
                      {"z_score", num(row.z_score)},
                      {"reference", num(row.reference)}});
    }
    j["rows"] = rows;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string to_json(const EnergyProfile& p) {
  ordered_json j;
  j["levels"] = p.levels;
  ordered_json e = ordered_json::array();
  for (double v : p.energies) e.push_back(num(v));
  j["energies"] = e;
  j["worst_drop"] = num(p.worst_drop);
  j["non_decreasing"] = p.non_decreasing;
  return j.dump(2) + "\n";
}

std::string to_csv(const ConvergenceReport& r) {
  std::ostringstream s;
  s << "level,error\n";
  for (std::size_t k = 0; k < r.levels.size(); ++k) {
    s << r.levels[k] << ',' << format_number(r.errors[k]) << '\n';
  }
  return s.str();
}

std::string to_csv(std::span<const ConvergenceReport> reports) {
  std::ostringstream s;
  s << "label,level,error\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
      s << r.label << ',' << r.levels[k] << ',' << format_number(r.errors[k]) << '\n';
    }
  }
  return s.str();
}

std::string to_csv(std::span<const PathLawReport> reports) {
  std::ostringstream s;
  s << "function,level,mc_mean,standard_error,exact,z_score,reference,error\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      const auto& row = r.rows[k];
      s << r.summary.label << ',' << row.level << ',' << format_number(row.mc_mean) << ','
        << format_number(row.standard_error) << ',' << format_number(row.exact) << ','
        << format_number(row.z_score) << ',' << format_number(row.reference) << ','
        << format_number(r.summary.errors[k]) << '\n';
    }
  }
  return s.str();
}

std::string to_json_line(const Trajectory& p) {
  ordered_json j;
  j["seed"] = p.seed;
  j["index"] = p.index;
  j["horizon"] = p.horizon;
  j["jump_times"] = p.jump_times;
  j["states"] = p.states;
  return j.dump();
}

}  // namespace sdlab
