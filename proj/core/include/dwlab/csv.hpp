// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_CSV_HPP
#define DWLAB_CSV_HPP

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace dwlab {

/// Shortest round-trip decimal form ("%.17g" trimmed), identical across runs.
std::string format_double(double v);

using CsvValue = std::variant<double, int, long long, std::string>;

/// Deterministic CSV emitter: "# schema_version=k" comment, header row, then
/// rows with doubles in round-trip form.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            int schemaVersion = 1);
  ~CsvWriter();

  void row(const std::vector<CsvValue>& values);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  size_t columns_ = 0;
};

}  // namespace dwlab

#endif
