// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_PRESETS_HPP
#define DWLAB_PRESETS_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dwlab/config.hpp"

namespace dwlab {

struct AssertionOutcome {
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
  std::string detail;
};

/// Record of one preset run: config identity, stage timings, every file the
/// run emitted, and the assertion outcomes. The manifest itself is written
/// last, after all listed artifacts exist.
struct RunManifest {
  int schemaVersion = 1;
  std::string preset;
  std::uint64_t configHash = 0;
  nlohmann::ordered_json config;
  std::vector<std::pair<std::string, double>> stageSeconds;
  std::vector<std::string> artifacts;
  std::vector<AssertionOutcome> assertions;

  bool allPass() const;
  nlohmann::ordered_json toJson() const;
  static RunManifest fromJson(const nlohmann::json& j);
};

/// Executes one scaling-law preset pipeline (gcc, normhyp, degenerate-m,
/// transfer, cutoff-gain, pressure, strip, decay), writing CSV/JSON artifacts
/// plus the manifest into config.outputDir. Throws Error("unknown-preset") for
/// unknown names and Error("invalid-config") for bad configs.
RunManifest run_preset(const std::string& name, const ExperimentConfig& config);

}  // namespace dwlab

#endif
