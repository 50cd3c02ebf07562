// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_CONFIG_HPP
#define DWLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwlab/geometry.hpp"

namespace dwlab {

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::TorusFamily;
  int m = 1;
};

struct ZWindowSpec {
  double delta = 0.25;
  double c0 = 1.0;
};

struct ModePolicySpec {
  double bandFactor = 2.0;
};

struct ResolutionSpec {
  int floorN = 256;
  int capN = 2048;
  double pointsFactor = 32.0;
};

/// One experiment: geometry, coefficients, scan ranges, policies, output.
/// Everything numerical is explicit so a config plus seed pins the outputs
/// byte for byte.
struct ExperimentConfig {
  int schemaVersion = 1;
  SurfaceSpec surface;
  ProfileParams profiles;
  bool uniformDamping = false;
  double uniformValue = 1.0;
  std::vector<double> hList;       // strictly decreasing
  std::vector<double> stripHList;  // subset used by the strip stage
  ZWindowSpec zWindow;
  ModePolicySpec modes;
  ResolutionSpec resolution;
  double stripConstant = 0.5;  // default P-prefactor for the decay calculus
  std::string outputDir = "out";
  std::uint64_t seed = 20240501;
  int threads = 0;

  static ExperimentConfig fromJsonText(const std::string& text);
  static ExperimentConfig fromJson(const nlohmann::json& j);
  nlohmann::ordered_json toJson() const;
  std::string canonicalText() const;  // serialized canonical form (indent 2)
  std::uint64_t hash() const;         // FNV-1a of the canonical text

  /// Field-level validation; scalingPreset additionally demands >= 5 h-values
  /// spanning a factor >= 8. Throws Error("invalid-config").
  void validate(bool scalingPreset) const;

  WarpedSurface buildSurface() const;
  ProfileSet buildProfiles() const;
  int resolutionFor(double h) const;
};

/// Built-in defaults per preset name (the preset decides damping shape,
/// h-lists, and surface order m when the caller does not override them).
ExperimentConfig default_config_for(const std::string& preset);

const std::vector<std::string>& known_presets();

}  // namespace dwlab

#endif
