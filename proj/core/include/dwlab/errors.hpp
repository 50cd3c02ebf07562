// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_ERRORS_HPP
#define DWLAB_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace dwlab {

/// Runtime error carrying a stable machine-readable code ("invalid-parameter",
/// "invalid-support", "branch-cut", ...) next to the human message. The CLI
/// maps codes to exit diagnostics and tests match on them.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace dwlab

#endif
