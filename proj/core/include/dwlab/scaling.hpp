// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_SCALING_HPP
#define DWLAB_SCALING_HPP

#include <string>
#include <utility>
#include <vector>

namespace dwlab {

/// Fitted resolvent growth law over an h-range. Power: norm ~ coeff * h^exponent
/// (exponent < 0); Log: norm ~ coeff * |log h| / h. Both residuals (RMS in log
/// space) are always reported so callers can compare model quality; telling
/// |log h| from a small power apart at desk scale is ill-posed, so nothing here
/// asserts model identity.
struct ScalingFit {
  enum class Model { Power, Log };

  Model model = Model::Power;
  double exponent = 0.0;  // power model slope d log(norm)/d log(h)
  double coeff = 0.0;     // prefactor of the chosen model
  double residualPower = 0.0;
  double residualLog = 0.0;
  double hMin = 0.0, hMax = 0.0;
  int count = 0;

  double normAt(double h) const;
  /// alpha(h) = h * norm(h) for the fitted model.
  double alphaAt(double h) const;
  /// Power exponent of alpha: exponent + 1 for the power model, 0 for log.
  double alphaExponent() const;
};

std::string to_string(ScalingFit::Model model);
ScalingFit::Model scaling_model_from_string(const std::string& name);

/// Least squares in log-log coordinates; requires >= 5 samples spanning an
/// h-factor >= 8 (Error("insufficient-samples") otherwise).
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& hNorm,
                       ScalingFit::Model model);

}  // namespace dwlab

#endif
