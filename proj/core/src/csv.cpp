// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/csv.hpp"

#include <cmath>
#include <cstdio>

#include "dwlab/errors.hpp"

namespace dwlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  // Shortest representation that round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     int schemaVersion)
    : path_(path), out_(path), columns_(columns.size()) {
  if (!out_) throw Error("io-error", "cannot open '" + path + "' for writing");
  out_ << "# schema_version=" << schemaVersion << "\n";
  for (size_t i = 0; i < columns.size(); ++i) out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(const std::vector<CsvValue>& values) {
  if (values.size() != columns_)
    throw Error("io-error", "csv row width does not match the header");
  for (size_t i = 0; i < values.size(); ++i) {
    if (std::holds_alternative<double>(values[i]))
      out_ << format_double(std::get<double>(values[i]));
    else if (std::holds_alternative<int>(values[i]))
      out_ << std::get<int>(values[i]);
    else if (std::holds_alternative<long long>(values[i]))
      out_ << std::get<long long>(values[i]);
    else
      out_ << std::get<std::string>(values[i]);
    out_ << (i + 1 < values.size() ? "," : "");
  }
  out_ << "\n";
}

}  // namespace dwlab
