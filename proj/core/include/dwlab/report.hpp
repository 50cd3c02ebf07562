// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_REPORT_HPP
#define DWLAB_REPORT_HPP

#include <string>
#include <vector>

#include "dwlab/presets.hpp"

namespace dwlab {

/// Human-readable summary: one table per preset with the asserted window and
/// verdict per assertion. Deterministic bytes for fixed manifests (timings are
/// deliberately not printed).
std::string emit_report(const std::vector<RunManifest>& manifests);

/// Plot-ready companion: preset, assertion, value, lo, hi, verdict.
void write_report_csv(const std::vector<RunManifest>& manifests, const std::string& path);

/// Loads every manifest_*.json under dir (sorted by filename).
std::vector<RunManifest> load_manifests(const std::string& dir);

}  // namespace dwlab

#endif
