#include "sdlab_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdlab/config.hpp"
#include "sdlab/convergence.hpp"
#include "sdlab/network_io.hpp"
#include "sdlab/reports.hpp"

namespace sdlab::cli {

namespace {

using nlohmann::json;

struct Session {
  StructureConfig structure;
  FractalHierarchy hierarchy;
  DriftModel drift;
  std::optional<double> delta;
  double diam = 0.0;
};

Session open_session(const RunConfig& c, int top) {
  auto sc = resolve_structure(c.structure);
  FractalHierarchy hier(sc.structure, sc.parameters, top);
  const double diam = resistance_diameter(hier.network(top));
  DriftModel model;
  std::optional<double> delta;
  if (c.drift == "default") {
    model = default_admissible_drift(hier, diam);
  } else if (c.drift != "none") {
    auto dc = load_drift_config(c.drift);
    model = std::move(dc.model);
    delta = dc.delta;
  }
  return Session{std::move(sc), std::move(hier), std::move(model), delta, diam};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::vector<int> level_list(int lo, int hi) {
  std::vector<int> v(static_cast<std::size_t>(hi - lo + 1));
  std::iota(v.begin(), v.end(), lo);
  return v;
}

// x-coordinate with an embedding; otherwise the harmonic extension of the
// indicator of the first boundary point.
Vector primary_test_function(const FractalHierarchy& hier, int level) {
  const auto& complex = hier.complex(level);
  if (complex.has_coordinates()) return coordinate_function(complex, 0);
  std::vector<VertexId> v0(hier.vertex_count(0));
  std::iota(v0.begin(), v0.end(), VertexId{0});
  Vector e = Vector::Zero(static_cast<Eigen::Index>(v0.size()));
  e(0) = 1.0;
  return harmonic_extension(hier.network(level), v0, e);
}

struct NamedFunction {
  std::string name;
  Vector values;
};

std::vector<NamedFunction> test_functions(const FractalHierarchy& hier, int level) {
  std::vector<NamedFunction> out;
  const auto& complex = hier.complex(level);
  if (complex.has_coordinates()) {
    const Vector x = coordinate_function(complex, 0);
    const Vector y = coordinate_function(complex, 1);
    out.push_back({"x", x});
    out.push_back({"y", y});
    out.push_back({"x_squared", x.cwiseProduct(x)});
    return out;
  }
  std::vector<VertexId> v0(hier.vertex_count(0));
  std::iota(v0.begin(), v0.end(), VertexId{0});
  for (std::size_t a = 0; a < std::min<std::size_t>(3, v0.size()); ++a) {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(v0.size()));
    e(static_cast<Eigen::Index>(a)) = 1.0;
    out.push_back({"harmonic_" + std::to_string(a), harmonic_extension(hier.network(level), v0, e)});
  }
  return out;
}

std::string label(const char* key, double v) { return std::string(key) + "=" + format_number(v); }

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InadmissibleDrift& e) {
    err << "inadmissible drift: " << e.what() << '\n';
    return kInadmissible;
  } catch (const InvalidRates& e) {
    err << "invalid rates: " << e.what() << '\n';
    return kInadmissible;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

std::string describe_failure(const LevelCheck& c, const std::string& assumption) {
  const auto& s = c.smallness;
  std::ostringstream m;
  m << "level " << c.level << ": ";
  if (!s.condition_I.satisfied) {
    m << "Condition (I) violated: drift energy " << format_number(s.condition_I.drift_energy)
      << " >= threshold " << format_number(s.condition_I.threshold) << " (margin "
      << format_number(s.condition_I.margin) << ")";
  } else if (assumption == "A" && !s.condition_II.satisfied) {
    m << "Condition (II) violated at vertex " << s.condition_II.argmax << ": energy "
      << format_number(s.condition_II.max_energy) << " > threshold "
      << format_number(s.condition_II.threshold) << " (margin "
      << format_number(s.condition_II.margin) << ")";
  } else if (assumption == "B" && !c.condition_III.satisfied) {
    m << "Condition (III) violated: cell boundaries leave V_n";
  } else if (!s.constants) {
    m << "no admissible s < 1 for the chosen delta";
  } else {
    m << "negative generator rates";
  }
  return m.str();
}

}  // namespace

int RunConfig::reference() const { return reference_level.value_or(std::max(level_max + 1, 6)); }

std::pair<int, int> parse_levels(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      throw ConfigError("invalid level '" + std::string(s) + "'");
    }
    return v;
  };
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    const int n = parse_int(text);
    return {n, n};
  }
  return {parse_int(text.substr(0, colon)), parse_int(text.substr(colon + 1))};
}

RunConfig apply_config_file(RunConfig c, const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  auto numbers = [](const json& v) {
    std::vector<double> out;
    if (v.is_array()) {
      for (const auto& x : v) out.push_back(x.get<double>());
    } else {
      out.push_back(v.get<double>());
    }
    return out;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "structure") c.structure = v.get<std::string>();
      else if (key == "levels") {
        if (v.is_string()) {
          std::tie(c.level_min, c.level_max) = parse_levels(v.get<std::string>());
        } else if (v.is_array() && v.size() == 2) {
          c.level_min = v[0].get<int>();
          c.level_max = v[1].get<int>();
        } else {
          c.level_min = c.level_max = v.get<int>();
        }
      } else if (key == "drift") c.drift = v.get<std::string>();
      else if (key == "alpha") c.alpha = numbers(v);
      else if (key == "t") c.t = numbers(v);
      else if (key == "paths") c.paths = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "assumption") c.assumption = v.get<std::string>();
      else if (key == "reference_level") c.reference_level = v.get<int>();
      else if (key == "start") c.start = v.get<std::size_t>();
      else if (key == "draws") c.draws = v.get<std::size_t>();
      else if (key == "sample_seed") c.sample_seed = v.get<std::uint64_t>();
      else if (key == "semigroup_tail") c.semigroup_tail = v.get<double>();
      else throw ConfigError("unknown run config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return c;
}

void validate(const RunConfig& c) {
  if (c.level_min < 1 || c.level_max < c.level_min) {
    throw ConfigError("levels must satisfy 1 <= min <= max");
  }
  if (c.assumption != "A" && c.assumption != "B") throw ConfigError("assumption must be A or B");
  for (double t : c.t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("times must be non-negative");
  }
  for (double a : c.alpha) {
    if (!std::isfinite(a)) throw ConfigError("alpha must be finite");
  }
  if (c.t.empty()) throw ConfigError("at least one time is required");
  if (!(c.semigroup_tail > 0.0 && c.semigroup_tail < 1.0)) {
    throw ConfigError("semigroup_tail must lie in (0,1)");
  }
}

int cmd_check(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const auto session = open_session(c, c.level_max);
    const auto& hier = session.hierarchy;
    CheckReport report;
    report.structure = session.structure.name;
    report.assumption = c.assumption;
    report.assumed_dense = session.structure.assumed_dense;
    report.diam_proxy = session.diam;
    report.working_level = c.level_max;
    for (int n = c.level_min; n <= c.level_max; ++n) {
      const auto spec = session.drift.at(hier, n);
      const auto& net = hier.network(n);
      LevelCheck lc;
      lc.level = n;
      lc.vertices = net.size();
      lc.smallness = smallness_report(net, spec, session.diam, session.delta);
      lc.condition_III = check_condition_III(hier.complex(n));
      if (lc.smallness.constants) {
        const auto forms = assemble_forms(net, spec, hier.measure(n), n);
        const SamplingOptions sampling{c.draws, c.sample_seed};
        lc.sandwich = verify_sandwich(forms, *lc.smallness.constants, sampling);
        lc.sd = verify_sd_axioms(forms, net, spec, *lc.smallness.constants, session.diam, sampling);
      }
      const auto gen = build_generator(net, spec, hier.measure(n));
      lc.rates = validate_rates(gen);
      lc.detailed_balance_violation = detailed_balance_violation(gen);
      const bool second = c.assumption == "A" ? lc.smallness.condition_II.satisfied
                                              : lc.condition_III.satisfied;
      lc.assumption_satisfied = lc.smallness.condition_I.satisfied && second &&
                                lc.smallness.constants.has_value() && lc.rates.valid();
      report.levels.push_back(std::move(lc));
    }
    const auto& working = report.levels.back();
    report.passed = working.assumption_satisfied;
    if (!report.passed) report.failure = describe_failure(working, c.assumption);

    std::filesystem::create_directories(c.out);
    write_file(c.out / "check_report.json", to_json(report));
    if (report.passed) {
      out << "Assumption " << c.assumption << " holds at level " << c.level_max << " (diam_proxy "
          << format_number(session.diam) << ")\n";
      return int{kSuccess};
    }
    err << "Assumption " << c.assumption << " fails: " << report.failure << '\n';
    return int{kInadmissible};
  });
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const int n = c.level_max;
    const auto session = open_session(c, n);
    const auto& hier = session.hierarchy;
    const auto spec = session.drift.at(hier, n);
    const auto gen = build_generator(hier.network(n), spec, hier.measure(n));
    const auto rates = validate_rates(gen);
    if (!rates.valid()) {
      const auto& v = rates.negative.front();
      err << "invalid rates: " << rates.negative.size() << " negative rates, first on edge ("
          << v.from << ", " << v.to << ") with rate " << format_number(v.rate) << '\n';
      return int{kInadmissible};
    }
    if (c.start >= gen.size()) throw ConfigError("start vertex is not in V_n");

    std::vector<double> times = c.t;
    std::sort(times.begin(), times.end());
    const double horizon = times.back();
    const ChainSampler sampler(gen);
    const auto initial = point_mass(gen.size(), c.start);
    const auto size = gen.size();

    std::filesystem::create_directories(c.out);
    std::ofstream traj(c.out / "trajectories.jsonl", std::ios::binary);
    std::ofstream grid(c.out / "trajectory_grid.csv", std::ios::binary);
    if (!traj || !grid) throw ConfigError("cannot write to " + c.out.string());
    grid << "path,t,state\n";

    std::vector<std::vector<double>> counts(times.size(), std::vector<double>(size, 0.0));
    std::vector<double> exposure(size, 0.0);
    std::vector<std::size_t> hold_count(size, 0);
    for (std::size_t k = 0; k < c.paths; ++k) {
      const auto path = sampler.simulate(initial, horizon, c.seed, k);
      traj << to_json_line(path) << '\n';
      for (std::size_t i = 0; i < times.size(); ++i) {
        const auto x = path.state_at(times[i]);
        counts[i][x] += 1.0;
        grid << k << ',' << format_number(times[i]) << ',' << x << '\n';
      }
      // Exposure includes the censored final holding; completed holdings are counted.
      for (std::size_t j = 0; j < path.states.size(); ++j) {
        const bool last = j + 1 == path.states.size();
        const double end = last ? path.horizon : path.jump_times[j + 1];
        exposure[path.states[j]] += end - path.jump_times[j];
        if (!last) ++hold_count[path.states[j]];
      }
    }

    std::ostringstream summary;
    summary << "t,vertex,empirical,exact\n";
    const Vector delta0 = Eigen::Map<const Vector>(initial.data(), static_cast<Eigen::Index>(size));
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Vector law =
          semigroup_apply(gen, times[i], delta0, {.tail = c.semigroup_tail, .transpose = true}).values;
      for (std::size_t x = 0; x < size; ++x) {
        summary << format_number(times[i]) << ',' << x << ',';
        if (c.paths > 0) summary << format_number(counts[i][x] / static_cast<double>(c.paths));
        summary << ',' << format_number(law(static_cast<Eigen::Index>(x))) << '\n';
      }
    }
    write_file(c.out / "summary.csv", summary.str());

    // Exponential holding times under right censoring: mean = exposure / completed,
    // standard error mean / sqrt(completed).
    std::ostringstream holding;
    holding << "vertex,completed_holdings,exposure,mean,standard_error,expected\n";
    for (std::size_t x = 0; x < size; ++x) {
      holding << x << ',' << hold_count[x] << ',' << format_number(exposure[x]) << ',';
      if (hold_count[x] > 0) {
        const double m = static_cast<double>(hold_count[x]);
        const double mean = exposure[x] / m;
        holding << format_number(mean) << ',' << format_number(mean / std::sqrt(m));
      } else {
        holding << ',';
      }
      holding << ',' << format_number(1.0 / sampler.holding_rate(x)) << '\n';
    }
    write_file(c.out / "holding.csv", holding.str());

    if (!session.drift.empty() && c.paths >= 2) {
      const auto symmetric = build_generator(hier.network(n), zero_drift(n), hier.measure(n));
      std::ostringstream paired;
      paired << "t,function,mean_drift,mean_symmetric,difference,difference_se\n";
      for (const auto& f : test_functions(hier, n)) {
        for (double t : times) {
          const auto p = paired_expectation(gen, symmetric, f.values, c.start, t, c.paths, c.seed);
          paired << format_number(t) << ',' << f.name << ',' << format_number(p.mean_a) << ','
                 << format_number(p.mean_b) << ',' << format_number(p.mean_difference) << ','
                 << format_number(p.difference_se) << '\n';
        }
      }
      write_file(c.out / "paired.csv", paired.str());
    }
    out << "simulated " << c.paths << " paths on level " << n << " (" << size
        << " vertices) to horizon " << format_number(horizon) << '\n';
    return int{kSuccess};
  });
}

int cmd_converge(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const int ref = c.reference();
    if (c.level_max > ref) throw ConfigError("levels must not exceed the reference level");
    const auto session = open_session(c, ref);
    const auto& hier = session.hierarchy;
    const ConvergenceLab lab(hier, session.drift, session.delta);
    const auto levels = level_list(c.level_min, c.level_max);
    const Vector f = primary_test_function(hier, ref);

    std::filesystem::create_directories(c.out);

    std::vector<ConvergenceReport> ks{ks_norm_check(hier, f, levels, ref)};
    ks.front().label = "f";
    write_file(c.out / "ks_norm.csv", to_csv(std::span<const ConvergenceReport>(ks)));
    write_file(c.out / "ks_norm.json", to_json(std::span<const ConvergenceReport>(ks)));

    std::vector<double> alphas = c.alpha;
    if (alphas.empty()) alphas.push_back(lab.constants().lambda + 1.0);
    std::vector<ConvergenceReport> res;
    for (double a : alphas) {
      res.push_back(resolvent_convergence(lab, a, f, levels, ref));
      res.back().label = label("alpha", a);
    }
    write_file(c.out / "resolvent.csv", to_csv(std::span<const ConvergenceReport>(res)));
    write_file(c.out / "resolvent.json", to_json(std::span<const ConvergenceReport>(res)));

    std::vector<ConvergenceReport> sem;
    for (double t : c.t) {
      sem.push_back(semigroup_convergence(lab, t, f, levels, ref));
      sem.back().label = label("t", t);
    }
    write_file(c.out / "semigroup.csv", to_csv(std::span<const ConvergenceReport>(sem)));
    write_file(c.out / "semigroup.json", to_json(std::span<const ConvergenceReport>(sem)));

    const auto fns = test_functions(hier, ref);
    std::vector<Vector> values;
    std::vector<std::string> names;
    for (const auto& fn : fns) {
      values.push_back(fn.values);
      names.push_back(fn.name);
    }
    std::vector<PathLawReport> laws;
    for (double t : c.t) {
      auto reports = path_law_convergence(lab, t, values, names, levels, ref,
                                          {std::max<std::size_t>(c.paths, 2), c.seed, c.start});
      for (auto& r : reports) {
        r.summary.label += "@" + label("t", t);
        laws.push_back(std::move(r));
      }
    }
    write_file(c.out / "path_law.csv", to_csv(std::span<const PathLawReport>(laws)));
    write_file(c.out / "path_law.json", to_json(std::span<const PathLawReport>(laws)));

    std::vector<int> all_levels = level_list(0, ref);
    write_file(c.out / "energy_profile.json",
               to_json(energy_monotonicity_profile(hier, f, all_levels)));

    out << "converge: levels " << c.level_min << ".." << c.level_max << " vs reference " << ref;
    if (res.front().final_to_initial) {
      out << ", resolvent final/initial " << format_number(*res.front().final_to_initial);
    }
    out << '\n';
    return int{kSuccess};
  });
}

int cmd_resolvent(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const int n = c.level_max;
    const auto session = open_session(c, n);
    const ConvergenceLab lab(session.hierarchy, session.drift, session.delta);
    const auto gen = lab.generator(n);
    const Vector f = primary_test_function(session.hierarchy, n);
    std::vector<double> alphas = c.alpha;
    if (alphas.empty()) alphas.push_back(lab.constants().lambda + 1.0);
    std::vector<VertexId> ids(gen.size());
    std::iota(ids.begin(), ids.end(), VertexId{0});

    std::filesystem::create_directories(c.out);
    json summary = json::array();
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const auto r = resolvent(gen, alphas[k], f, lab.constants().lambda);
      std::ostringstream s;
      write_vertex_function(s, ids, r.values);
      const auto name = "resolvent_" + std::to_string(k) + ".txt";
      write_file(c.out / name, s.str());
      summary.push_back({{"alpha", r.alpha},
                         {"file", name},
                         {"residual", r.residual},
                         {"norm_ratio", r.norm_ratio},
                         {"norm_bound", *r.norm_bound},
                         {"lambda", lab.constants().lambda}});
    }
    write_file(c.out / "resolvent.json", summary.dump(2) + "\n");
    out << "resolvent: " << alphas.size() << " solves on level " << n << '\n';
    return int{kSuccess};
  });
}

int cmd_semigroup(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(c);
    const int n = c.level_max;
    const auto session = open_session(c, n);
    const ConvergenceLab lab(session.hierarchy, session.drift, session.delta);
    const auto gen = lab.generator(n);
    const Vector f = primary_test_function(session.hierarchy, n);
    std::vector<VertexId> ids(gen.size());
    std::iota(ids.begin(), ids.end(), VertexId{0});

    std::filesystem::create_directories(c.out);
    json summary = json::array();
    for (std::size_t k = 0; k < c.t.size(); ++k) {
      const auto r = semigroup_apply(gen, c.t[k], f, {.tail = c.semigroup_tail, .transpose = false});
      std::ostringstream s;
      write_vertex_function(s, ids, r.values);
      const auto name = "semigroup_" + std::to_string(k) + ".txt";
      write_file(c.out / name, s.str());
      summary.push_back({{"t", r.t},
                         {"file", name},
                         {"uniformization_rate", r.rate},
                         {"truncation_order", r.truncation_order},
                         {"tail_bound", r.tail_bound}});
    }
    const auto growth = contraction_growth_check(gen, lab.constants().lambda, c.t, c.seed);
    json g = json::array();
    for (const auto& p : growth.points) {
      g.push_back({{"t", p.t}, {"norm_estimate", p.norm_estimate}, {"bound", p.bound},
                   {"passed", p.passed}});
    }
    write_file(c.out / "semigroup.json",
               json{{"applications", summary}, {"growth", g}, {"lambda", growth.lambda}}.dump(2) +
                   "\n");
    out << "semigroup: " << c.t.size() << " applications on level " << n << '\n';
    return int{kSuccess};
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift-perturbed forms and Markov chains on p.c.f. fractal approximations"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string levels = "1:4";
  std::string config_path;
  std::optional<int> reference;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--structure", cfg.structure, "built-in structure name or JSON file");
    sub->add_option("--levels", levels, "level range a:b or single level n");
    sub->add_option("--drift", cfg.drift, "none | default | path to drift JSON");
    sub->add_option("--alpha", cfg.alpha, "resolvent parameters (default lambda + 1)");
    sub->add_option("--t", cfg.t, "times");
    sub->add_option("--paths", cfg.paths, "Monte-Carlo paths");
    sub->add_option("--seed", cfg.seed, "Monte-Carlo seed");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--assumption", cfg.assumption, "A or B")->check(CLI::IsMember({"A", "B"}));
    sub->add_option("--reference-level", reference, "reference level for convergence");
    sub->add_option("--start", cfg.start, "initial vertex id");
    sub->add_option("--draws", cfg.draws, "random test functions per level in check");
    sub->add_option("--config", config_path, "JSON run config; its keys override flags");
  };
  auto* check = app.add_subcommand("check", "smallness conditions, constants and axiom checks");
  auto* simulate = app.add_subcommand("simulate", "simulate chain trajectories");
  auto* converge = app.add_subcommand("converge", "level-to-reference convergence reports");
  auto* resolvent_cmd = app.add_subcommand("resolvent", "resolvent of the x-coordinate");
  auto* semigroup_cmd = app.add_subcommand("semigroup", "semigroup applied to the x-coordinate");
  for (auto* s : {check, simulate, converge, resolvent_cmd, semigroup_cmd}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? int{kSuccess} : int{kUsage};
  }
  try {
    std::tie(cfg.level_min, cfg.level_max) = parse_levels(levels);
    cfg.reference_level = reference;
    if (!config_path.empty()) cfg = apply_config_file(cfg, config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }
  if (check->parsed()) return cmd_check(cfg, out, err);
  if (simulate->parsed()) return cmd_simulate(cfg, out, err);
  if (converge->parsed()) return cmd_converge(cfg, out, err);
  if (resolvent_cmd->parsed()) return cmd_resolvent(cfg, out, err);
  return cmd_semigroup(cfg, out, err);
}

}  // namespace sdlab::cli
