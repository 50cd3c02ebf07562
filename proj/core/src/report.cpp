// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dwlab/csv.hpp"
#include "dwlab/errors.hpp"

namespace dwlab {

namespace fs = std::filesystem;

std::string emit_report(const std::vector<RunManifest>& manifests) {
  std::ostringstream out;
  out << "dwlab report\n============\n";
  if (manifests.empty()) {
    out << "no manifests loaded\n";
    return out.str();
  }
  bool any = false;
  for (const RunManifest& m : manifests) {
    out << "\npreset: " << m.preset << "  (config " << std::hex << m.configHash << std::dec
        << ")\n";
    if (m.assertions.empty()) {
      out << "  no assertions evaluated\n";
      continue;
    }
    any = true;
    for (const AssertionOutcome& a : m.assertions) {
      out << "  " << (a.pass ? "PASS" : "FAIL") << "  " << a.name << "  value="
          << format_double(a.value) << "  window=[" << format_double(a.lo) << ", "
          << format_double(a.hi) << "]";
      if (!a.detail.empty()) out << "  (" << a.detail << ")";
      out << "\n";
    }
  }
  if (!any) out << "\nno assertions evaluated\n";
  int fails = 0, total = 0;
  for (const RunManifest& m : manifests)
    for (const AssertionOutcome& a : m.assertions) {
      ++total;
      if (!a.pass) ++fails;
    }
  out << "\n" << (total - fails) << "/" << total << " assertions passed\n";
  return out.str();
}

void write_report_csv(const std::vector<RunManifest>& manifests, const std::string& path) {
  CsvWriter csv(path, {"preset", "assertion", "value", "lo", "hi", "verdict"});
  for (const RunManifest& m : manifests)
    for (const AssertionOutcome& a : m.assertions)
      csv.row({m.preset, a.name, a.value, a.lo, a.hi, std::string(a.pass ? "pass" : "fail")});
}

std::vector<RunManifest> load_manifests(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("io-error", "'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("manifest_", 0) == 0 && entry.path().extension() == ".json")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunManifest> out;
  for (const std::string& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    in >> j;
    out.push_back(RunManifest::fromJson(j));
  }
  return out;
}

}  // namespace dwlab
