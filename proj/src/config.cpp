#include "blochsim/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <string>

#include "blochsim/coupler.hpp"

namespace blochsim {

namespace {

using nlohmann::json;

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
  return j;
}

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& known) {
  for (const auto& [key, _] : j.items())
    if (!known.contains(key)) throw ConfigError(path + "." + key, "unknown field");
}

const json* find_field(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

double require_number(const json& j, const std::string& path, const char* key) {
  const json* f = find_field(j, key);
  if (!f) throw ConfigError(path + "." + key, "missing required field");
  return number_at(*f, path + "." + key);
}

std::optional<double> optional_number(const json& j, const std::string& path, const char* key) {
  const json* f = find_field(j, key);
  if (!f) return std::nullopt;
  return number_at(*f, path + "." + key);
}

long long require_integer(const json& j, const std::string& path, const char* key) {
  const json* f = find_field(j, key);
  if (!f) throw ConfigError(path + "." + key, "missing required field");
  if (!f->is_number_integer() && !f->is_number_unsigned())
    throw ConfigError(path + "." + key, "expected an integer");
  return f->get<long long>();
}

LatticeSpec parse_lattice(const json& j) {
  require_object(j, "lattice");
  reject_unknown_keys(j, "lattice", {"num_sites", "coupling", "diag_offset"});
  LatticeSpec spec;
  const long long n = require_integer(j, "lattice", "num_sites");
  if (n < 2) throw ConfigError("lattice.num_sites", "must be >= 2");
  spec.num_sites = static_cast<int>(n);
  spec.coupling = require_number(j, "lattice", "coupling");
  if (!(spec.coupling > 0.0)) throw ConfigError("lattice.coupling", "must be > 0");
  spec.diag_offset = optional_number(j, "lattice", "diag_offset").value_or(0.0);
  return spec;
}

GeometrySpec parse_geometry(const json& j, double default_length_cm) {
  require_object(j, "geometry");
  reject_unknown_keys(j, "geometry",
                      {"effective_index", "spacing_um", "wavelength_nm", "curvature_radius_cm",
                       "device_length_cm"});
  GeometrySpec g;
  g.effective_index = require_number(j, "geometry", "effective_index");
  g.spacing_um = require_number(j, "geometry", "spacing_um");
  g.wavelength_nm = require_number(j, "geometry", "wavelength_nm");
  g.curvature_radius_cm = optional_number(j, "geometry", "curvature_radius_cm").value_or(1.0);
  g.device_length_cm =
      optional_number(j, "geometry", "device_length_cm").value_or(default_length_cm);
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("geometry", e.what());
  }
  return g;
}

CouplerConfig parse_coupler(const json& j) {
  require_object(j, "coupler");
  reject_unknown_keys(j, "coupler", {"coupling", "phase", "detuning"});
  CouplerConfig c;
  c.coupling = require_number(j, "coupler", "coupling");
  if (!(c.coupling > 0.0)) throw ConfigError("coupler.coupling", "must be > 0");
  c.phase = optional_number(j, "coupler", "phase");
  c.detuning = optional_number(j, "coupler", "detuning");
  if (c.phase.has_value() == c.detuning.has_value())
    throw ConfigError("coupler", "exactly one of phase / detuning must be given");
  if (c.phase && (*c.phase < 0.0 || *c.phase > std::numbers::pi))
    throw ConfigError("coupler.phase", "must lie in [0, pi]");
  if (c.detuning && (*c.detuning < 0.0 || *c.detuning > 2.0 * c.coupling))
    throw ConfigError("coupler.detuning", "must lie in [0, 2*coupling]");
  return c;
}

InputConfig parse_input(const json& j, int num_sites) {
  require_object(j, "input");
  reject_unknown_keys(j, "input", {"type", "sites", "phase"});
  InputConfig in;

  const json* type = find_field(j, "type");
  if (!type || !type->is_string()) throw ConfigError("input.type", "expected a string");
  const std::string t = type->get<std::string>();
  if (t == "epr")
    in.type = InputType::epr;
  else if (t == "separable")
    in.type = InputType::separable;
  else if (t == "distinguishable")
    in.type = InputType::distinguishable;
  else
    throw ConfigError("input.type", "must be one of epr | separable | distinguishable");

  const json* sites = find_field(j, "sites");
  if (!sites || !sites->is_array() || sites->size() != 2)
    throw ConfigError("input.sites", "expected an array of two site indices");
  long long s[2];
  for (int i = 0; i < 2; ++i) {
    const json& e = (*sites)[i];
    if (!e.is_number_integer() && !e.is_number_unsigned())
      throw ConfigError("input.sites[" + std::to_string(i) + "]", "expected an integer");
    s[i] = e.get<long long>();
    if (s[i] < 0 || s[i] >= num_sites)
      throw ConfigError("input.sites[" + std::to_string(i) + "]",
                        "must lie in [0, " + std::to_string(num_sites - 1) + "]");
  }
  if (s[0] == s[1]) throw ConfigError("input.sites", "sites must be distinct");
  in.site_a = static_cast<std::size_t>(s[0]);
  in.site_b = static_cast<std::size_t>(s[1]);

  if (in.type == InputType::distinguishable && in.site_b != in.site_a + 1)
    throw ConfigError("input.sites",
                      "distinguishable pairs enter the embedded coupler: sites must be adjacent "
                      "(b = a+1)");

  in.phase = optional_number(j, "input", "phase");
  if (in.phase && in.type != InputType::epr)
    throw ConfigError("input.phase", "only meaningful for type = epr");
  return in;
}

RunConfig parse_run(const json& j) {
  require_object(j, "run");
  reject_unknown_keys(j, "run", {"fractions", "device_length_cm"});
  RunConfig run;
  const json* fr = find_field(j, "fractions");
  if (!fr || !fr->is_array() || fr->empty())
    throw ConfigError("run.fractions", "expected a non-empty array");
  for (std::size_t i = 0; i < fr->size(); ++i) {
    const double f = number_at((*fr)[i], "run.fractions[" + std::to_string(i) + "]");
    if (!(f > 0.0) || f > 1.0)
      throw ConfigError("run.fractions[" + std::to_string(i) + "]", "must lie in (0, 1]");
    run.fractions.push_back(f);
  }
  run.device_length_cm = require_number(j, "run", "device_length_cm");
  if (!(run.device_length_cm > 0.0)) throw ConfigError("run.device_length_cm", "must be > 0");
  return run;
}

DetectionConfig parse_detection(const json& j, int num_sites) {
  require_object(j, "detection");
  reject_unknown_keys(j, "detection",
                      {"pair_rate", "integration", "window", "accidental_rate", "efficiencies",
                       "diagonal_split", "seed"});
  DetectionConfig d;
  d.pair_rate = optional_number(j, "detection", "pair_rate").value_or(d.pair_rate);
  d.integration = optional_number(j, "detection", "integration").value_or(d.integration);
  d.window = optional_number(j, "detection", "window").value_or(d.window);
  d.accidental_rate =
      optional_number(j, "detection", "accidental_rate").value_or(d.accidental_rate);
  d.diagonal_split = optional_number(j, "detection", "diagonal_split").value_or(d.diagonal_split);
  if (const json* eff = find_field(j, "efficiencies")) {
    if (!eff->is_array()) throw ConfigError("detection.efficiencies", "expected an array");
    for (std::size_t i = 0; i < eff->size(); ++i)
      d.efficiencies.push_back(
          number_at((*eff)[i], "detection.efficiencies[" + std::to_string(i) + "]"));
  }
  if (const json* seed = find_field(j, "seed")) {
    if (!seed->is_number_integer() && !seed->is_number_unsigned())
      throw ConfigError("detection.seed", "expected an integer");
    d.seed = seed->get<std::uint64_t>();
  }
  try {
    d.validate(static_cast<std::size_t>(num_sites));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("detection", e.what());
  }
  return d;
}

}  // namespace

DeviceConfig parse_config(const json& j) {
  const json& doc = j.is_object() && j.contains("config") ? j.at("config") : j;
  require_object(doc, "<config>");
  reject_unknown_keys(doc, "<config>",
                      {"lattice", "geometry", "coupler", "input", "run", "detection", "output"});

  DeviceConfig cfg;
  if (!doc.contains("lattice")) throw ConfigError("lattice", "missing required section");
  cfg.lattice = parse_lattice(doc.at("lattice"));
  if (!doc.contains("run")) throw ConfigError("run", "missing required section");
  cfg.run = parse_run(doc.at("run"));
  if (doc.contains("geometry"))
    cfg.geometry = parse_geometry(doc.at("geometry"), cfg.run.device_length_cm);
  if (!doc.contains("coupler")) throw ConfigError("coupler", "missing required section");
  cfg.coupler = parse_coupler(doc.at("coupler"));
  if (!doc.contains("input")) throw ConfigError("input", "missing required section");
  cfg.input = parse_input(doc.at("input"), cfg.lattice.num_sites);
  if (doc.contains("detection"))
    cfg.detection = parse_detection(doc.at("detection"), cfg.lattice.num_sites);
  if (const json* out = find_field(doc, "output")) {
    if (!out->is_string()) throw ConfigError("output", "expected a string");
    cfg.output = out->get<std::string>();
  }
  return cfg;
}

DeviceConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

ResolvedCoupler resolve_coupler(const CouplerConfig& c) {
  ResolvedCoupler r;
  r.coupling = c.coupling;
  try {
    if (c.phase) {
      r.phase = *c.phase;
      r.detuning = detuning_for_phase(r.phase, c.coupling);
    } else {
      r.detuning = c.detuning.value();
      r.phase = phase_of_detuning(r.detuning, c.coupling);
    }
    r.splitter_length_cm = splitter_length(r.detuning, c.coupling);
  } catch (const std::domain_error& e) {
    throw ConfigError(c.phase ? "coupler.phase" : "coupler.detuning", e.what());
  }
  return r;
}

double resolved_input_phase(const DeviceConfig& cfg) {
  if (cfg.input.phase) return *cfg.input.phase;
  return resolve_coupler(cfg.coupler).phase;
}

nlohmann::json resolved_config_json(const DeviceConfig& cfg) {
  json j;
  j["lattice"] = {{"num_sites", cfg.lattice.num_sites},
                  {"coupling", cfg.lattice.coupling},
                  {"diag_offset", cfg.lattice.diag_offset}};
  if (cfg.geometry) {
    j["geometry"] = {{"effective_index", cfg.geometry->effective_index},
                     {"spacing_um", cfg.geometry->spacing_um},
                     {"wavelength_nm", cfg.geometry->wavelength_nm},
                     {"curvature_radius_cm", cfg.geometry->curvature_radius_cm},
                     {"device_length_cm", cfg.geometry->device_length_cm}};
  }
  // Detuning is the canonical coupler knob in resolved documents; the phase
  // is recomputed on load, so resolution is idempotent.
  const ResolvedCoupler rc = resolve_coupler(cfg.coupler);
  j["coupler"] = {{"coupling", rc.coupling}, {"detuning", rc.detuning}};
  json input = {{"sites", {cfg.input.site_a, cfg.input.site_b}}};
  switch (cfg.input.type) {
    case InputType::epr:
      input["type"] = "epr";
      input["phase"] = resolved_input_phase(cfg);
      break;
    case InputType::separable:
      input["type"] = "separable";
      break;
    case InputType::distinguishable:
      input["type"] = "distinguishable";
      break;
  }
  j["input"] = input;
  j["run"] = {{"fractions", cfg.run.fractions}, {"device_length_cm", cfg.run.device_length_cm}};
  if (cfg.detection) {
    j["detection"] = {{"pair_rate", cfg.detection->pair_rate},
                      {"integration", cfg.detection->integration},
                      {"window", cfg.detection->window},
                      {"accidental_rate", cfg.detection->accidental_rate},
                      {"efficiencies", cfg.detection->efficiencies},
                      {"diagonal_split", cfg.detection->diagonal_split},
                      {"seed", cfg.detection->seed}};
  }
  return j;
}

nlohmann::json make_manifest(const DeviceConfig& cfg, const std::string& command) {
  json m;
  m["command"] = command;
  m["config"] = resolved_config_json(cfg);
  const ResolvedCoupler rc = resolve_coupler(cfg.coupler);
  json derived;
  derived["coupler"] = {{"detuning", rc.detuning},
                        {"phase", rc.phase},
                        {"splitter_length_cm", rc.splitter_length_cm}};
  json rows = json::array();
  for (const double f : cfg.run.fractions) {
    json row;
    row["fraction"] = f;
    row["bloch_period_cm"] = cfg.run.device_length_cm / f;
    row["ramp_per_cm"] = 2.0 * std::numbers::pi * f / cfg.run.device_length_cm;
    if (cfg.geometry)
      row["curvature_radius_cm"] =
          curvature_for_ramp(row["ramp_per_cm"].get<double>(), *cfg.geometry);
    rows.push_back(row);
  }
  derived["per_fraction"] = rows;
  m["derived"] = derived;
  m["generator"] = {{"name", kToolName}, {"version", kToolVersion}};
  return m;
}

}  // namespace blochsim
