// config.hpp — JSON device configuration: parsing, validation with field
// paths, default resolution, and the reproducibility manifest.
//
// One JSON document describes a device family: lattice and coupler rates, the
// input state, the list of Bloch-cycle fractions sharing one physical sample
// length, optional fabrication geometry, and optional detection parameters.
// A run manifest embeds the fully resolved config under "config", so any
// manifest is itself loadable as a config and reproduces the run bit-for-bit.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "blochsim/lattice.hpp"
#include "blochsim/noise.hpp"

namespace blochsim {

inline constexpr const char* kToolName = "blochsim";
inline constexpr const char* kToolVersion = "1.0.0";

// Thrown for every malformed or inconsistent config field; `path` is the
// JSON pointer-ish location ("coupler.detuning", "run.fractions[2]", ...).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class InputType { epr, separable, distinguishable };

struct InputConfig {
  InputType type = InputType::epr;
  std::size_t site_a = 0;  // first fed lattice site
  std::size_t site_b = 1;  // second fed lattice site
  std::optional<double> phase;  // epr only; defaults to the coupler phase
};

struct CouplerConfig {
  double coupling = 0.0;
  std::optional<double> phase;     // exactly one of phase/detuning in the file
  std::optional<double> detuning;
};

struct RunConfig {
  std::vector<double> fractions;  // z/λ_B per device, each in (0, 1]
  double device_length_cm = 0.0;  // shared physical length L
};

struct DeviceConfig {
  LatticeSpec lattice;  // ramp stays 0 here; it is derived per fraction
  std::optional<GeometrySpec> geometry;
  CouplerConfig coupler;
  InputConfig input;
  RunConfig run;
  std::optional<DetectionConfig> detection;
  std::string output;  // optional output directory hint; not part of manifests
};

// Parse + validate.  Accepts either a plain config document or a manifest
// (object with a "config" key).
DeviceConfig parse_config(const nlohmann::json& j);
DeviceConfig load_config_file(const std::string& path);

// The coupler section with both φ and Δβ materialized (they are redundant
// once the balanced-splitter relation fixes one from the other).
struct ResolvedCoupler {
  double coupling = 0.0;
  double detuning = 0.0;
  double phase = 0.0;
  double splitter_length_cm = 0.0;
};

ResolvedCoupler resolve_coupler(const CouplerConfig& c);

// EPR phase fed to the lattice: input.phase if given, else the coupler's.
double resolved_input_phase(const DeviceConfig& cfg);

// Fully resolved, round-trippable config document (defaults materialized,
// output directory omitted).  parse_config(resolved_config_json(c)) resolves
// to the same document.
nlohmann::json resolved_config_json(const DeviceConfig& cfg);

// Manifest: {"config": resolved, "derived": {...}, "generator": {...},
// "command": name}.  Serialize with manifest.dump(2) + '\n' for stable bytes.
nlohmann::json make_manifest(const DeviceConfig& cfg, const std::string& command);

}  // namespace blochsim
