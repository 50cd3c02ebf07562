// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/config.hpp"

#include <algorithm>
#include <set>

#include "dwlab/errors.hpp"
#include "dwlab/grid.hpp"

namespace dwlab {

namespace {

const std::vector<double> kScalingHList = {1.0 / 16, 1.0 / 23, 1.0 / 32, 1.0 / 45,
                                           1.0 / 64, 1.0 / 91, 1.0 / 128};
const std::vector<double> kDyadicHList = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};

void expect_fields(const nlohmann::json& j, const std::set<std::string>& allowed,
                   const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw Error("invalid-config", "unknown field '" + where + it.key() + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::fromJsonText(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("invalid-config", std::string("config is not valid JSON: ") + e.what());
  }
  return fromJson(j);
}

ExperimentConfig ExperimentConfig::fromJson(const nlohmann::json& j) {
  ExperimentConfig c;
  expect_fields(j,
                {"schema_version", "surface", "profiles", "h_list", "strip_h_list", "z_window",
                 "mode_policy", "resolution", "strip_constant", "output_dir", "seed", "threads"},
                "");
  try {
    c.schemaVersion = j.value("schema_version", 1);
    if (j.contains("surface")) {
      const auto& s = j.at("surface");
      expect_fields(s, {"kind", "m"}, "surface.");
      c.surface.kind = surface_kind_from_string(s.value("kind", "torus"));
      c.surface.m = s.value("m", 1);
    }
    if (j.contains("profiles")) {
      const auto& p = j.at("profiles");
      expect_fields(p,
                    {"damp_inner", "damp_full", "plateau", "sharpness", "forbidden_radius",
                     "v1_radius", "b1_outer", "uniform", "uniform_value"},
                    "profiles.");
      c.profiles.dampInner = p.value("damp_inner", c.profiles.dampInner);
      c.profiles.dampFull = p.value("damp_full", c.profiles.dampFull);
      c.profiles.plateau = p.value("plateau", c.profiles.plateau);
      c.profiles.sharpness = p.value("sharpness", c.profiles.sharpness);
      c.profiles.forbiddenRadius = p.value("forbidden_radius", c.profiles.forbiddenRadius);
      c.profiles.v1Radius = p.value("v1_radius", c.profiles.v1Radius);
      c.profiles.b1Outer = p.value("b1_outer", c.profiles.b1Outer);
      c.uniformDamping = p.value("uniform", false);
      c.uniformValue = p.value("uniform_value", 1.0);
    }
    if (j.contains("h_list")) c.hList = j.at("h_list").get<std::vector<double>>();
    if (j.contains("strip_h_list"))
      c.stripHList = j.at("strip_h_list").get<std::vector<double>>();
    if (j.contains("z_window")) {
      const auto& z = j.at("z_window");
      expect_fields(z, {"delta", "c0"}, "z_window.");
      c.zWindow.delta = z.value("delta", 0.25);
      c.zWindow.c0 = z.value("c0", 1.0);
    }
    if (j.contains("mode_policy")) {
      const auto& m = j.at("mode_policy");
      expect_fields(m, {"band_factor"}, "mode_policy.");
      c.modes.bandFactor = m.value("band_factor", 2.0);
    }
    if (j.contains("resolution")) {
      const auto& r = j.at("resolution");
      expect_fields(r, {"floor", "cap", "points_factor"}, "resolution.");
      c.resolution.floorN = r.value("floor", 256);
      c.resolution.capN = r.value("cap", 2048);
      c.resolution.pointsFactor = r.value("points_factor", 32.0);
    }
    c.stripConstant = j.value("strip_constant", 0.5);
    c.outputDir = j.value("output_dir", "out");
    c.seed = j.value("seed", static_cast<std::uint64_t>(20240501));
    c.threads = j.value("threads", 0);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error("invalid-config", std::string("config field has the wrong type: ") + e.what());
  }
  if (c.hList.empty()) c.hList = kScalingHList;
  if (c.stripHList.empty()) c.stripHList = kDyadicHList;
  return c;
}

nlohmann::ordered_json ExperimentConfig::toJson() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schemaVersion;
  j["surface"] = {{"kind", to_string(surface.kind)}, {"m", surface.m}};
  j["profiles"] = {{"damp_inner", profiles.dampInner},
                   {"damp_full", profiles.dampFull},
                   {"plateau", profiles.plateau},
                   {"sharpness", profiles.sharpness},
                   {"forbidden_radius", profiles.forbiddenRadius},
                   {"v1_radius", profiles.v1Radius},
                   {"b1_outer", profiles.b1Outer},
                   {"uniform", uniformDamping},
                   {"uniform_value", uniformValue}};
  j["h_list"] = hList;
  j["strip_h_list"] = stripHList;
  j["z_window"] = {{"delta", zWindow.delta}, {"c0", zWindow.c0}};
  j["mode_policy"] = {{"band_factor", modes.bandFactor}};
  j["resolution"] = {{"floor", resolution.floorN},
                     {"cap", resolution.capN},
                     {"points_factor", resolution.pointsFactor}};
  j["strip_constant"] = stripConstant;
  j["output_dir"] = outputDir;
  j["seed"] = seed;
  j["threads"] = threads;
  return j;
}

std::string ExperimentConfig::canonicalText() const { return toJson().dump(2) + "\n"; }

std::uint64_t ExperimentConfig::hash() const {
  const std::string text = canonicalText();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void ExperimentConfig::validate(bool scalingPreset) const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error("invalid-config", field + ": " + why);
  };
  if (surface.m < 1) fail("surface.m", "must be an integer >= 1");
  if (hList.empty()) fail("h_list", "must not be empty");
  for (size_t i = 0; i < hList.size(); ++i) {
    if (!(hList[i] > 0.0 && hList[i] <= 1.0)) fail("h_list", "entries must lie in (0, 1]");
    if (i > 0 && hList[i] >= hList[i - 1]) fail("h_list", "must be strictly decreasing");
  }
  if (scalingPreset) {
    if (hList.size() < 5) fail("h_list", "scaling presets need >= 5 h-values");
    if (hList.front() / hList.back() < 8.0 - 1e-12)
      fail("h_list", "scaling presets need h spanning a factor >= 8");
  }
  for (size_t i = 0; i < stripHList.size(); ++i) {
    if (!(stripHList[i] > 0.0 && stripHList[i] <= 1.0))
      fail("strip_h_list", "entries must lie in (0, 1]");
    if (i > 0 && stripHList[i] >= stripHList[i - 1])
      fail("strip_h_list", "must be strictly decreasing");
  }
  if (!(zWindow.delta > 0.0 && zWindow.delta < 1.0)) fail("z_window.delta", "must lie in (0, 1)");
  if (!(zWindow.c0 > 0.0)) fail("z_window.c0", "must be positive");
  if (modes.bandFactor <= 1.0) fail("mode_policy.band_factor", "must exceed 1");
  if (resolution.floorN < 64) fail("resolution.floor", "must be >= 64");
  if (resolution.capN < resolution.floorN) fail("resolution.cap", "must be >= floor");
  if (resolution.pointsFactor <= 0.0) fail("resolution.points_factor", "must be positive");
  if (uniformDamping && uniformValue <= 0.0) fail("profiles.uniform_value", "must be positive");
  if (stripConstant <= 0.0) fail("strip_constant", "must be positive");
}

WarpedSurface ExperimentConfig::buildSurface() const {
  return WarpedSurface::build(surface.kind, surface.m);
}

ProfileSet ExperimentConfig::buildProfiles() const {
  return uniformDamping ? build_uniform_damping(uniformValue)
                        : build_standard_profiles(profiles);
}

int ExperimentConfig::resolutionFor(double h) const {
  return resolution_for(h, resolution.floorN, resolution.capN, resolution.pointsFactor);
}

const std::vector<std::string>& known_presets() {
  static const std::vector<std::string> presets = {"gcc",         "normhyp",  "degenerate-m",
                                                   "transfer",    "cutoff-gain", "pressure",
                                                   "strip",       "decay"};
  return presets;
}

ExperimentConfig default_config_for(const std::string& preset) {
  ExperimentConfig c;
  c.hList = kScalingHList;
  c.stripHList = kDyadicHList;
  if (preset == "gcc") {
    c.uniformDamping = true;
    c.uniformValue = 1.0;
    c.surface.m = 1;
  } else if (preset == "normhyp" || preset == "pressure" || preset == "strip") {
    c.surface.m = 1;
  } else if (preset == "degenerate-m" || preset == "transfer" || preset == "cutoff-gain" ||
             preset == "decay") {
    c.surface.m = 2;
  } else {
    throw Error("unknown-preset", "no preset named '" + preset + "'");
  }
  return c;
}

}  // namespace dwlab
