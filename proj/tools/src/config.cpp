#include "config.hpp"

#include <cstdlib>
#include <fstream>

namespace darc::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw SpecError("config", message); }

double number(const json& node, const std::string& key, double fallback) {
  if (!node.contains(key)) return fallback;
  if (!node.at(key).is_number()) fail("'" + key + "' must be a number");
  return node.at(key).get<double>();
}

AtomicOp parse_op(const std::string& name) {
  if (name == "raise") return AtomicOp::Raise;
  if (name == "lower") return AtomicOp::Lower;
  if (name == "exc_proj") return AtomicOp::ExcProj;
  if (name == "gnd_proj") return AtomicOp::GndProj;
  fail("unknown atomic operator '" + name + "'");
}

HamiltonianSpec parse_hamiltonian(const json& node, int n_levels) {
  const double omega_0 = number(node, "omega_0", 1.0);
  if (node.contains("terms")) {
    HamiltonianSpec spec;
    spec.omega_0 = omega_0;
    spec.omega_L = 1.0;
    spec.n_levels = n_levels;
    for (const auto& term : node.at("terms")) {
      CouplingTerm t;
      t.op = parse_op(term.value("op", std::string{}));
      if (!term.contains("photon_shift")) fail("coupling term needs 'photon_shift'");
      t.photon_shift = term.at("photon_shift").get<int>();
      if (!term.contains("strength")) fail("coupling term needs 'strength'");
      t.strength = term.at("strength").get<double>();
      t.hermitian_close = term.value("hermitian_close", false);
      spec.terms.push_back(t);
    }
    return spec;
  }
  const double rabi = number(node, "rabi", 0.0);
  const double asym = number(node, "asym", 0.0);
  const bool cr = node.value("counter_rotating", false);
  return standard_spec(omega_0, 1.0, rabi, asym, cr, n_levels);
}

FormFactor parse_form_factor(const json& node, double omega_0) {
  const std::string kind = node.value("kind", std::string("power_law"));
  if (kind == "flat") return FormFactor::flat(number(node, "gamma_0", 1e-4));
  if (kind == "power_law") {
    const double gamma_0 = number(node, "gamma_0", 1e-4);
    const double exponent = number(node, "exponent", 3.0);
    const double omega_ref = number(node, "omega_ref", omega_0);
    return FormFactor::power_law(gamma_0, omega_ref, exponent);
  }
  if (kind == "tabulated") {
    if (!node.contains("omega") || !node.contains("gamma"))
      fail("tabulated form factor needs 'omega' and 'gamma' arrays");
    return FormFactor::tabulated(node.at("omega").get<std::vector<double>>(),
                                 node.at("gamma").get<std::vector<double>>());
  }
  fail("unknown form factor kind '" + kind + "'");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("top-level config must be an object");
  RunConfig config;
  config.raw = doc;

  const json numerics = doc.value("numerics", json::object());
  const int n_levels = numerics.value("n_levels", 50);
  config.pipeline.doublets.edge_fraction = number(numerics, "edge_fraction", 0.2);
  config.pipeline.amplitudes.n_independence_tol = number(numerics, "n_independence_tol", 1e-6);
  config.pipeline.rates.hypothesis_threshold = number(numerics, "hypothesis_threshold", 0.1);
  if (numerics.contains("q_max")) config.pipeline.q_max = numerics.at("q_max").get<int>();

  const json ham = doc.value("hamiltonian", json::object());
  config.spec = parse_hamiltonian(ham, n_levels);
  config.form_factor =
      parse_form_factor(doc.value("form_factor", json::object()), config.spec.omega_0);

  if (doc.contains("grid")) {
    const json& grid = doc.at("grid");
    config.grid.omega_min = number(grid, "omega_min", 0.0);
    config.grid.omega_max = number(grid, "omega_max", 0.0);
    config.grid.points = grid.value("points", 2000);
    if (config.grid.points < 2) fail("grid needs at least two points");
  }

  if (doc.contains("sweep")) {
    const json& sweep = doc.at("sweep");
    RunConfig::Sweep s;
    s.parameter = sweep.value("parameter", std::string{});
    if (s.parameter.empty()) fail("sweep needs a 'parameter' path");
    if (!sweep.contains("values") || !sweep.at("values").is_array() ||
        sweep.at("values").empty())
      fail("sweep needs a non-empty 'values' array");
    s.values = sweep.at("values").get<std::vector<double>>();
    config.sweep = std::move(s);
  }

  if (doc.contains("dynamics")) {
    const json& dyn = doc.at("dynamics");
    if (dyn.contains("horizon")) config.dynamics.horizon = dyn.at("horizon").get<double>();
    if (dyn.contains("dt")) config.dynamics.dt = dyn.at("dt").get<double>();
  }

  const json output = doc.value("output", json::object());
  config.output_directory = output.value("directory", std::string("out"));
  if (output.contains("formats")) {
    config.formats.clear();
    for (const auto& f : output.at("formats")) {
      const std::string name = f.get<std::string>();
      if (name != "csv" && name != "json") fail("unknown output format '" + name + "'");
      config.formats.insert(name);
    }
    if (config.formats.empty()) fail("output formats must not be empty");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    fail("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

RunConfig config_with_parameter(const RunConfig& base, const std::string& parameter,
                                double value) {
  std::string pointer = "/" + parameter;
  for (auto& c : pointer)
    if (c == '.') c = '/';
  json doc = base.raw;
  try {
    doc[json::json_pointer(pointer)] = value;
  } catch (const json::exception&) {
    fail("cannot set sweep parameter '" + parameter + "'");
  }
  return parse_config(doc);
}

std::filesystem::path resolve_output_dir(const RunConfig& config,
                                         const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DARC_OUTPUT_DIR"); env != nullptr && *env != '\0')
    return std::filesystem::path(env);
  return config.output_directory;
}

}  // namespace darc::cli
