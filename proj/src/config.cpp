#include "fbp/config.hpp"

#include "fbp/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace fbp {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + fmt(v[k]);
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(trim(s), &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
  if (used != trim(s).size() || !std::isfinite(v)) throw ConfigError(key + ": expected a finite number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(trim(s), &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  }
  if (used != trim(s).size()) throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  const long long v = to_integer(key, s);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(key + ": integer out of range");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(to_double(key, item));
  return out;
}

struct Key {
  std::string section, name;
  std::function<std::optional<std::string>(const RunConfig&)> get;  // nullopt: not written
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
};

template <typename Member>
Key real_key(std::string sec, std::string name, Member m) {
  return {sec, name, [m](const RunConfig& c) -> std::optional<std::string> { return fmt(m(c)); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { m(c) = to_double(k, v); }};
}
template <typename Member>
Key int_key(std::string sec, std::string name, Member m) {
  return {sec, name, [m](const RunConfig& c) -> std::optional<std::string> { return std::to_string(m(c)); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { m(c) = to_int(k, v); }};
}
template <typename Member>
Key string_key(std::string sec, std::string name, Member m) {
  return {sec, name, [m](const RunConfig& c) -> std::optional<std::string> { return m(c); },
          [m](RunConfig& c, const std::string&, const std::string& v) { m(c) = trim(v); }};
}
template <typename Member>
Key list_key(std::string sec, std::string name, Member m) {
  return {sec, name, [m](const RunConfig& c) -> std::optional<std::string> { return fmt_list(m(c)); },
          [m](RunConfig& c, const std::string& k, const std::string& v) { m(c) = to_list(k, v); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> t;
    t.push_back(string_key("problem", "preset", [](auto& c) -> auto& { return c.problem.preset; }));
    t.push_back(real_key("problem", "A", [](auto& c) -> auto& { return c.problem.A; }));
    t.push_back(real_key("problem", "eps", [](auto& c) -> auto& { return c.problem.eps; }));
    t.push_back(int_key("problem", "nodes", [](auto& c) -> auto& { return c.problem.nodes; }));
    t.push_back(string_key("problem", "table", [](auto& c) -> auto& { return c.problem.table; }));

    t.push_back(real_key("energy", "epsilon", [](auto& c) -> auto& { return c.energy.epsilon; }));
    t.push_back({"energy", "chi_weight",
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.energy.chi_weight ? std::optional(fmt(*c.energy.chi_weight)) : std::nullopt;
                 },
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.energy.chi_weight = to_double(k, v); }});
    t.push_back({"energy", "phase",
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.energy.phase ? std::optional(to_string(*c.energy.phase)) : std::nullopt;
                 },
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   try {
                     c.energy.phase = phase_from_string(trim(v));
                   } catch (const std::invalid_argument& e) {
                     throw ConfigError(k + ": " + e.what());
                   }
                 }});

    t.push_back(int_key("solve", "max_iters", [](auto& c) -> auto& { return c.solve.max_iters; }));
    t.push_back(real_key("solve", "grad_tol", [](auto& c) -> auto& { return c.solve.grad_tol; }));
    t.push_back(list_key("solve", "continuation", [](auto& c) -> auto& { return c.solve.continuation; }));
    t.push_back(int_key("solve", "memory", [](auto& c) -> auto& { return c.solve.memory; }));
    t.push_back({"solve", "seed",
                 [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.solve.seed); },
                 [](RunConfig& c, const std::string& k, const std::string& v) {
                   const long long s = to_integer(k, v);
                   if (s < 0) throw ConfigError(k + ": seed must be >= 0");
                   c.solve.seed = static_cast<std::uint64_t>(s);
                 }});
    t.push_back(int_key("solve", "max_halvings", [](auto& c) -> auto& { return c.solve.max_halvings; }));

    t.push_back(string_key("field", "source", [](auto& c) -> auto& { return c.field.source; }));
    t.push_back(string_key("field", "file", [](auto& c) -> auto& { return c.field.file; }));
    t.push_back(real_key("field", "amplitude", [](auto& c) -> auto& { return c.field.amplitude; }));
    t.push_back(real_key("field", "rotation_deg", [](auto& c) -> auto& { return c.field.rotation_deg; }));
    t.push_back(int_key("field", "n", [](auto& c) -> auto& { return c.field.n; }));
    t.push_back(real_key("field", "lo", [](auto& c) -> auto& { return c.field.lo; }));
    t.push_back(real_key("field", "hi", [](auto& c) -> auto& { return c.field.hi; }));

    t.push_back(real_key("diagnostics", "cx", [](auto& c) -> auto& { return c.diagnostics.cx; }));
    t.push_back(real_key("diagnostics", "cy", [](auto& c) -> auto& { return c.diagnostics.cy; }));
    t.push_back(real_key("diagnostics", "rmin", [](auto& c) -> auto& { return c.diagnostics.rmin; }));
    t.push_back(real_key("diagnostics", "rmax", [](auto& c) -> auto& { return c.diagnostics.rmax; }));
    t.push_back(int_key("diagnostics", "nr", [](auto& c) -> auto& { return c.diagnostics.nr; }));
    t.push_back(int_key("diagnostics", "n_theta", [](auto& c) -> auto& { return c.diagnostics.n_theta; }));
    t.push_back({"diagnostics", "richardson",
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::string(c.diagnostics.richardson ? "true" : "false");
                 },
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.diagnostics.richardson = to_bool(k, v); }});
    t.push_back(real_key("diagnostics", "r", [](auto& c) -> auto& { return c.diagnostics.r; }));
    t.push_back(list_key("diagnostics", "deltas", [](auto& c) -> auto& { return c.diagnostics.deltas; }));
    t.push_back(list_key("diagnostics", "scales", [](auto& c) -> auto& { return c.diagnostics.scales; }));
    t.push_back(string_key("diagnostics", "mask", [](auto& c) -> auto& { return c.diagnostics.mask; }));
    t.push_back(int_key("diagnostics", "k0", [](auto& c) -> auto& { return c.diagnostics.k0; }));
    t.push_back({"diagnostics", "c_bound",
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return c.diagnostics.c_bound ? std::optional(fmt(*c.diagnostics.c_bound)) : std::nullopt;
                 },
                 [](RunConfig& c, const std::string& k, const std::string& v) { c.diagnostics.c_bound = to_double(k, v); }});

    t.push_back(string_key("output", "dir", [](auto& c) -> auto& { return c.output_dir; }));
    return t;
  }();
  return table;
}

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : keys())
    if (k.section == section && k.name == name) return &k;
  return nullptr;
}

}  // namespace

std::vector<double> RunConfig::radii() const {
  const auto& d = diagnostics;
  if (d.nr == 1) return {d.rmin};
  std::vector<double> r(d.nr);
  for (int k = 0; k < d.nr; ++k) r[k] = d.rmin + (d.rmax - d.rmin) * k / (d.nr - 1);
  return r;
}

RunConfig parse_config(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [name, value] : body) {
      const Key* k = find_key(section, name);
      if (!k) throw ConfigError("config: unknown key '" + section + "." + name + "'");
      k->set(cfg, section + "." + name, value.data());
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("config: cannot open " + path);
  return parse_config(is);
}

void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError("override '" + dotted_key + "' must be section.key");
  const Key* k = find_key(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!k) throw ConfigError("config: unknown key '" + dotted_key + "'");
  k->set(cfg, dotted_key, value);
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  std::string section;
  for (const auto& k : keys()) {
    const auto v = k.get(cfg);
    if (!v) continue;
    if (k.section != section) {
      os << (section.empty() ? "" : "\n") << '[' << k.section << "]\n";
      section = k.section;
    }
    os << k.name << " = " << *v << '\n';
  }
}

void validate(const RunConfig& c) {
  const auto& p = c.problem;
  if (p.preset != "example1" && p.preset != "example2" && p.preset != "example3" && p.preset != "custom")
    throw ConfigError("problem.preset must be example1, example2, example3 or custom");
  if (!(p.A > 0.0)) throw ConfigError("problem.A must be > 0");
  if (!(p.eps > 0.0)) throw ConfigError("problem.eps must be > 0");
  if (p.nodes < 5) throw ConfigError("problem.nodes must be >= 5");
  if (p.preset == "custom" && p.table.empty()) throw ConfigError("problem.table is required for the custom preset");
  if (!(c.energy.epsilon >= 0.0)) throw ConfigError("energy.epsilon must be >= 0");
  if (c.energy.chi_weight && !(*c.energy.chi_weight >= 0.0)) throw ConfigError("energy.chi_weight must be >= 0");
  try {
    c.solve.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto& f = c.field;
  if (f.source == "file") {
    if (f.file.empty()) throw ConfigError("field.file is required when field.source = file");
  } else {
    try {
      field_preset_from_string(f.source);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field.source: ") + e.what());
    }
  }
  if (f.n < 5) throw ConfigError("field.n must be >= 5");
  if (!(f.hi > f.lo)) throw ConfigError("field.hi must exceed field.lo");
  const auto& d = c.diagnostics;
  if (!(d.rmin > 0.0 && d.rmax >= d.rmin)) throw ConfigError("diagnostics radii need 0 < rmin <= rmax");
  if (d.nr < 1 || (d.nr > 1 && d.rmax == d.rmin)) throw ConfigError("diagnostics.nr must be >= 1 with distinct radii");
  if (d.n_theta < 16) throw ConfigError("diagnostics.n_theta must be >= 16");
  if (!(d.r > 0.0)) throw ConfigError("diagnostics.r must be > 0");
  if (d.scales.empty()) throw ConfigError("diagnostics.scales must not be empty");
  for (double s : d.scales)
    if (!(s > 0.0)) throw ConfigError("diagnostics.scales must be positive");
  if (d.k0 < 1) throw ConfigError("diagnostics.k0 must be >= 1");
  if (c.output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

Problem make_problem(const RunConfig& cfg) {
  const auto& p = cfg.problem;
  Problem prob = [&] {
    if (p.preset == "example1") return example1_problem(p.A, p.nodes);
    if (p.preset == "example2") return example2_problem(p.eps, p.nodes);
    if (p.preset == "example3") return example3_problem(p.A, p.nodes);
    return Problem{"custom", read_csv_file(p.table), EnergySpec{}};
  }();
  prob.spec.epsilon = cfg.energy.epsilon;
  if (cfg.energy.chi_weight) prob.spec.chi_weight = *cfg.energy.chi_weight;
  if (cfg.energy.phase) prob.spec.phase = *cfg.energy.phase;
  return prob;
}

GridFunctiond make_field(const RunConfig& cfg) {
  const auto& f = cfg.field;
  if (f.source == "file") return read_csv_file(f.file);
  return analytic_field(field_preset_from_string(f.source), Grid::square(f.lo, f.hi, f.n), f.amplitude,
                        f.rotation_deg * M_PI / 180.0);
}

}  // namespace fbp
