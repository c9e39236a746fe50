// fbp: command-line front end for the biharmonic free-boundary library.

#include "fbp/acceptance.hpp"
#include "fbp/analytic1d.hpp"
#include "fbp/config.hpp"
#include "fbp/diagnostics.hpp"
#include "fbp/errors.hpp"
#include "fbp/flatness.hpp"
#include "fbp/minimize.hpp"
#include "fbp/report.hpp"
#include "fbp/whitney.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace fbp;

namespace {

enum Exit { ok = 0, failed = 1, config_error = 2, not_converged = 3, io_error = 4 };

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  Overrides overrides;
};

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
  sub->add_option("--config", c.config, "INI configuration file");
  sub->add_option("--set", c.sets, "override section.key=value (repeatable)");
  if (with_out) sub->add_option("--out", c.out, "output file (default: stdout)");
}

void bind(CLI::App* sub, Common& c, const std::string& flag, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(flag, [&c, key](const std::string& v) { c.overrides.emplace_back(key, v); }, help);
}

void bind_point(CLI::App* sub, Common& c, const std::string& flag, const std::string& kx, const std::string& ky,
                const std::string& help) {
  sub->add_option_function<std::string>(
      flag,
      [&c, kx, ky](const std::string& v) {
        const auto comma = v.find(',');
        if (comma == std::string::npos) throw ConfigError(kx + ": expected x,y");
        c.overrides.emplace_back(kx, v.substr(0, comma));
        c.overrides.emplace_back(ky, v.substr(comma + 1));
      },
      help);
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects section.key=value, got '" + s + "'");
    set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : c.overrides) set_config_value(cfg, k, v);
  validate(cfg);
  return cfg;
}

/// Writes through `body` to --out, or stdout when it is empty.
template <typename F>
void emit(const std::string& path, F&& body) {
  if (path.empty()) {
    body(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  body(os);
  if (!os) throw IoError("failed to write " + path);
}

double last_epsilon(const SolveReport& r) { return r.stages.empty() ? 0.0 : r.stages.back().epsilon; }

int cmd_solve(const Common& c) {
  const RunConfig cfg = resolve(c);
  const Problem prob = make_problem(cfg);
  const SolveResult res = solve(prob.boundary, prob.spec, cfg.solve);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir + ": " + ec.message());
  const fs::path dir(cfg.output_dir);

  write_csv_file((dir / "solution.csv").string(), res.u);
  Json body = {{"problem", prob.name},
               {"spec",
                {{"epsilon", prob.spec.epsilon},
                 {"chi_weight", prob.spec.chi_weight},
                 {"phase", to_string(prob.spec.phase)}}},
               {"solve", to_json(res.report)}};
  if (res.u.grid().dim == 1) {
    const auto a_h = free_boundary_1d(res.u, last_epsilon(res.report));
    body["a_h"] = a_h ? Json(*a_h) : Json(nullptr);
    body["min_u"] = res.u.values().minCoeff();
  }
  write_json_file((dir / "solve_report.json").string(), make_report("solve", body));
  emit((dir / "resolved_config.ini").string(), [&](std::ostream& os) { write_config(os, cfg); });
  if (!res.report.converged) {
    std::fprintf(stderr, "fbp: solver did not converge (outputs kept in %s)\n", cfg.output_dir.c_str());
    return not_converged;
  }
  return ok;
}

int cmd_sweep(const Common& c, const std::string& values, double a_min, double a_max, int count) {
  const RunConfig cfg = resolve(c);
  std::vector<double> As;
  if (!values.empty()) {
    std::stringstream ss(values);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        As.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("--A-values: bad number '" + item + "'");
      }
    }
  } else {
    if (count < 1 || !(a_max >= a_min) || !(a_min > 0.0)) throw ConfigError("sweep1d: need 0 < A-min <= A-max, count >= 1");
    for (int k = 0; k < count; ++k) As.push_back(count == 1 ? a_min : a_min + (a_max - a_min) * k / (count - 1));
  }
  EnergySpec spec;
  spec.epsilon = cfg.energy.epsilon;
  if (cfg.energy.chi_weight) spec.chi_weight = *cfg.energy.chi_weight;
  const auto rows = sweep1d(As, cfg.problem.nodes, spec, cfg.solve);
  emit(c.out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
  for (const auto& r : rows)
    if (!r.converged) return not_converged;
  return ok;
}

int cmd_oracle(const Common& c, const std::string& which) {
  const RunConfig cfg = resolve(c);
  Json j;
  if (which == "example1") {
    j = make_report("oracle_example1", to_json(example1_profile(cfg.problem.A)));
  } else if (which == "example2") {
    const Example2Solution s = example2_solve(cfg.problem.eps);
    Json body = to_json(s);
    body["junction"] =
        to_json(junction_check(s.alpha, s.ddu_minus(), s.ddu_plus(), s.dddu_minus(), s.dddu_plus(), 1e-12, s.eps_weight));
    j = make_report("oracle_example2", body);
  } else if (which == "example4") {
    j = make_report("oracle_example4", {{"u", to_json(example4_profile())}});
  } else {
    throw ConfigError("oracle: expected example1, example2 or example4");
  }
  emit(c.out, [&](std::ostream& os) { write_json(os, j); });
  return ok;
}

int cmd_monotone(const Common& c) {
  const RunConfig cfg = resolve(c);
  MonotoneOptions opts;
  opts.n_theta = cfg.diagnostics.n_theta;
  opts.richardson = cfg.diagnostics.richardson;
  const MonotoneTrace t = monotone_energy(make_field(cfg), cfg.center(), cfg.radii(), opts);
  emit(c.out, [&](std::ostream& os) { write_monotone_csv(os, t); });
  return ok;
}

FreeBoundary field_fb(const GridFunctiond& u) { return extract_free_boundary(u, 0.0, default_grad_tol(u)); }

int cmd_flatness(const Common& c) {
  const RunConfig cfg = resolve(c);
  FlatnessOptions opts;
  opts.deltas = cfg.diagnostics.deltas;
  const GridFunctiond u = make_field(cfg);
  const Grid& g = u.grid();
  const Point x0 = cfg.center();
  const double rad = cfg.diagnostics.r;
  if (x0.x() - rad < g.ox || x0.x() + rad > g.x_max() || x0.y() - rad < g.oy || x0.y() + rad > g.y_max())
    throw std::out_of_range("flatness: B_r(x0) exits the grid");
  const FlatnessReport r = flatness_h(field_fb(u), x0, rad, opts);
  emit(c.out, [&](std::ostream& os) { write_json(os, make_report("flatness", to_json(r))); });
  return ok;
}

int cmd_classify(const Common& c) {
  const RunConfig cfg = resolve(c);
  const BlowupClass b = classify_blowup(make_field(cfg), cfg.center(), cfg.diagnostics.scales);
  emit(c.out, [&](std::ostream& os) {
    Json body = to_json(b);
    body["center"] = Json::array({cfg.diagnostics.cx, cfg.diagnostics.cy});
    write_json(os, make_report("classify", body));
  });
  return ok;
}

int cmd_whitney(const Common& c, const std::string& x0_text, int K, const std::string& write_mask_path) {
  const RunConfig cfg = resolve(c);
  const CompactMask E = cfg.diagnostics.mask.empty()
                            ? CompactMask::from_field(K, cfg.center(), make_field(cfg))
                            : read_mask_file(cfg.diagnostics.mask);
  if (!write_mask_path.empty()) write_mask_file(write_mask_path, E);
  Point x0 = E.x0;
  if (!x0_text.empty()) {
    const auto comma = x0_text.find(',');
    if (comma == std::string::npos) throw ConfigError("--x0: expected x,y");
    try {
      x0 = {std::stod(x0_text.substr(0, comma)), std::stod(x0_text.substr(comma + 1))};
    } catch (const std::exception&) {
      throw ConfigError("--x0: expected x,y");
    }
  }
  const WhitneyDecomposition dec = decompose(E);
  const WhitneyAudit a = audit(E, dec);
  const CoveringReport cov = weak_c_covering(dec, x0, cfg.diagnostics.k0, cfg.diagnostics.c_bound);
  Json body = to_json(dec, a);
  body["covering"] = to_json(cov);
  body["covering"]["x0"] = Json::array({x0.x(), x0.y()});
  emit(c.out, [&](std::ostream& os) { write_json(os, make_report("whitney", body)); });
  return ok;
}

/// Runs one diagnostic, recording its error instead of aborting the battery.
template <typename F>
Json guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {{"error", e.what()}};
  }
}

int cmd_diagnose(const Common& c) {
  const RunConfig cfg = resolve(c);
  const GridFunctiond u = make_field(cfg);
  const Grid& g = u.grid();
  const Point x0 = cfg.center();
  const std::vector<double> radii = cfg.radii();
  std::vector<double> decay_radii;
  for (double r : radii) {
    const double R = 4.0 * r;
    if (x0.x() - R >= g.ox && x0.x() + R <= g.x_max() && x0.y() - R >= g.oy && x0.y() + R <= g.y_max())
      decay_radii.push_back(r);
  }
  const double rmax = cfg.diagnostics.rmax;
  const Box region{x0.x() - rmax, x0.x() + rmax, x0.y() - rmax, x0.y() + rmax};

  Json body;
  body["center"] = Json::array({x0.x(), x0.y()});
  body["nondegeneracy"] = guarded([&] { return to_json(nondegeneracy_ratio(u, x0, radii)); });
  body["nondegeneracy_positive"] = guarded([&] { return to_json(nondegeneracy_ratio(u, x0, radii, true)); });
  body["density"] = guarded([&] { return to_json(density_positivity(u, x0, radii)); });
  body["hessian_decay"] = guarded([&] {
    if (decay_radii.empty()) throw std::out_of_range("no radius with B_4R inside the grid");
    return to_json(hessian_decay_check(u, x0, decay_radii));
  });
  body["laplacian_bmo"] = guarded([&] { return to_json(bmo_seminorm(laplacian(u), region, radii)); });
  body["laplacian_lower_bound"] = guarded([&] { return to_json(laplacian_lower_bound(u, cfg.diagnostics.rmin)); });
  emit(c.out, [&](std::ostream& os) { write_json(os, make_report("diagnose", body)); });
  return ok;
}

int cmd_reproduce(const Common& c, const std::string& target, std::optional<double> A, std::optional<double> eps,
                  std::optional<int> nodes) {
  std::vector<CriterionResult> results;
  if (target == "all") {
    for (int id = 1; id <= criterion_count; ++id) {
      results.push_back(run_criterion(id));
      std::printf("%s\n", format_result(results.back()).c_str());
      std::fflush(stdout);
    }
  } else {
    if (target == "example1") {
      results.push_back(reproduce_example1(A.value_or(4.0), nodes.value_or(2049)));
    } else if (target == "example2") {
      results.push_back(reproduce_example2(eps.value_or(0.1), nodes.value_or(4097)));
    } else if (target == "example3") {
      results.push_back(reproduce_example3(A.value_or(10.0), nodes.value_or(2049)));
    } else {
      int id = 0;
      try {
        id = std::stoi(target);
      } catch (const std::exception&) {
        throw ConfigError("reproduce: target must be all, 1.." + std::to_string(criterion_count) +
                          ", example1, example2 or example3");
      }
      results.push_back(run_criterion(id));
    }
    std::printf("%s\n", format_result(results.back()).c_str());
  }
  if (!c.out.empty())
    emit(c.out, [&](std::ostream& os) {
      for (const auto& r : results) os << format_result(r) << '\n';
    });
  for (const auto& r : results)
    if (!r.pass) return failed;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biharmonic free-boundary solver and diagnostics"};
  app.require_subcommand(1);

  Common solve_c, sweep_c, oracle_c, mono_c, flat_c, class_c, whit_c, diag_c, repro_c;

  auto* solve_cmd = app.add_subcommand("solve", "minimize the functional for a configured problem");
  add_common(solve_cmd, solve_c, false);
  bind(solve_cmd, solve_c, "--preset", "problem.preset", "example1 | example2 | example3 | custom");
  bind(solve_cmd, solve_c, "--A", "problem.A", "domain parameter of examples 1 and 3");
  bind(solve_cmd, solve_c, "--eps", "problem.eps", "volume weight of example 2");
  bind(solve_cmd, solve_c, "--nodes", "problem.nodes", "grid nodes");
  bind(solve_cmd, solve_c, "--table", "problem.table", "grid CSV with boundary data (custom)");
  bind(solve_cmd, solve_c, "--seed", "solve.seed", "initial-guess noise seed");
  bind(solve_cmd, solve_c, "--dir", "output.dir", "output directory");

  std::string a_values;
  double a_min = 1.0, a_max = 5.0;
  int a_count = 9;
  auto* sweep_cmd = app.add_subcommand("sweep1d", "example 1 over a range of A");
  add_common(sweep_cmd, sweep_c);
  sweep_cmd->add_option("--A-values", a_values, "comma-separated A values");
  sweep_cmd->add_option("--A-min", a_min, "first A")->capture_default_str();
  sweep_cmd->add_option("--A-max", a_max, "last A")->capture_default_str();
  sweep_cmd->add_option("--count", a_count, "number of A values")->capture_default_str();
  bind(sweep_cmd, sweep_c, "--nodes", "problem.nodes", "grid nodes per solve");

  std::string oracle_which;
  auto* oracle_cmd = app.add_subcommand("oracle", "closed-form 1D solutions");
  add_common(oracle_cmd, oracle_c);
  oracle_cmd->add_option("which", oracle_which, "example1 | example2 | example4")->required();
  bind(oracle_cmd, oracle_c, "--A", "problem.A", "right endpoint for example 1");
  bind(oracle_cmd, oracle_c, "--eps", "problem.eps", "volume weight for example 2");

  auto add_field = [&](CLI::App* sub, Common& c) {
    bind(sub, c, "--field", "field.source", "analytic field preset, or 'file'");
    bind(sub, c, "--field-file", "field.file", "grid CSV of the field");
    bind(sub, c, "--amplitude", "field.amplitude", "amplitude of the analytic field");
    bind(sub, c, "--rotation", "field.rotation_deg", "rotation of the analytic field in degrees");
    bind(sub, c, "--n", "field.n", "nodes per axis of the analytic field");
    bind_point(sub, c, "--center", "diagnostics.cx", "diagnostics.cy", "center x,y");
  };

  auto* mono_cmd = app.add_subcommand("monotone", "monotonicity energy E(r) and the integrated Q-term");
  add_common(mono_cmd, mono_c);
  add_field(mono_cmd, mono_c);
  bind(mono_cmd, mono_c, "--rmin", "diagnostics.rmin", "smallest radius");
  bind(mono_cmd, mono_c, "--rmax", "diagnostics.rmax", "largest radius");
  bind(mono_cmd, mono_c, "--nr", "diagnostics.nr", "number of radii");
  bind(mono_cmd, mono_c, "--ntheta", "diagnostics.n_theta", "angular samples");

  auto* flat_cmd = app.add_subcommand("flatness", "rank-2 flatness h(r, x0) of the free boundary");
  add_common(flat_cmd, flat_c);
  add_field(flat_cmd, flat_c);
  bind(flat_cmd, flat_c, "--r", "diagnostics.r", "ball radius");
  bind(flat_cmd, flat_c, "--delta", "diagnostics.deltas", "comma-separated delta values");

  auto* class_cmd = app.add_subcommand("classify", "blow-up classification at a singular point");
  add_common(class_cmd, class_c);
  add_field(class_cmd, class_c);
  bind(class_cmd, class_c, "--scales", "diagnostics.scales", "comma-separated decreasing scales");

  std::string whit_x0;
  int whit_K = 8;
  std::string whit_write;
  auto* whit_cmd = app.add_subcommand("whitney", "Whitney decomposition and weak c-covering");
  add_common(whit_cmd, whit_c);
  add_field(whit_cmd, whit_c);
  bind(whit_cmd, whit_c, "--mask", "diagnostics.mask", "mask file (default: {u <= 0} of the field)");
  whit_cmd->add_option("--x0", whit_x0, "covering point x,y (default: mask center)");
  bind(whit_cmd, whit_c, "--k0", "diagnostics.k0", "first level checked");
  bind(whit_cmd, whit_c, "--c-bound", "diagnostics.c_bound", "fail levels whose constant exceeds this");
  whit_cmd->add_option("--K", whit_K, "mask resolution when built from the field")->capture_default_str();
  whit_cmd->add_option("--write-mask", whit_write, "also write the mask used");

  auto* diag_cmd = app.add_subcommand("diagnose", "nondegeneracy, density, Hessian decay, BMO and Laplacian bounds");
  add_common(diag_cmd, diag_c);
  add_field(diag_cmd, diag_c);
  bind(diag_cmd, diag_c, "--rmin", "diagnostics.rmin", "smallest radius");
  bind(diag_cmd, diag_c, "--rmax", "diagnostics.rmax", "largest radius");
  bind(diag_cmd, diag_c, "--nr", "diagnostics.nr", "number of radii");

  std::string repro_target = "all";
  std::optional<double> repro_A, repro_eps;
  std::optional<int> repro_nodes;
  auto* repro_cmd = app.add_subcommand("reproduce", "acceptance checks, one PASS/FAIL line each");
  repro_cmd->add_option("target", repro_target, "all | 1..14 | example1 | example2 | example3")->capture_default_str();
  repro_cmd->add_option("--A", repro_A, "A for example1/example3");
  repro_cmd->add_option("--eps", repro_eps, "volume weight for example2");
  repro_cmd->add_option("--nodes", repro_nodes, "grid nodes");
  repro_cmd->add_option("--out", repro_c.out, "also write the lines to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return config_error;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_c);
    if (*sweep_cmd) return cmd_sweep(sweep_c, a_values, a_min, a_max, a_count);
    if (*oracle_cmd) return cmd_oracle(oracle_c, oracle_which);
    if (*mono_cmd) return cmd_monotone(mono_c);
    if (*flat_cmd) return cmd_flatness(flat_c);
    if (*class_cmd) return cmd_classify(class_c);
    if (*whit_cmd) return cmd_whitney(whit_c, whit_x0, whit_K, whit_write);
    if (*diag_cmd) return cmd_diagnose(diag_c);
    if (*repro_cmd) return cmd_reproduce(repro_c, repro_target, repro_A, repro_eps, repro_nodes);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return config_error;
  } catch (const IoError& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return io_error;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return not_converged;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return config_error;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return config_error;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fbp: %s\n", e.what());
    return failed;
  }
  return failed;
}
