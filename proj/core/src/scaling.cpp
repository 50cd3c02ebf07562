// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

double ScalingFit::normAt(double h) const {
  if (model == Model::Power) return coeff * std::pow(h, exponent);
  return coeff * std::fabs(std::log(h)) / h;
}

double ScalingFit::alphaAt(double h) const { return std::max(1.0, h * normAt(h)); }

double ScalingFit::alphaExponent() const {
  return model == Model::Power ? exponent + 1.0 : 0.0;
}

std::string to_string(ScalingFit::Model model) {
  return model == ScalingFit::Model::Power ? "power" : "log";
}

ScalingFit::Model scaling_model_from_string(const std::string& name) {
  if (name == "power") return ScalingFit::Model::Power;
  if (name == "log") return ScalingFit::Model::Log;
  throw Error("invalid-parameter", "unknown scaling model '" + name + "'");
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& hNorm,
                       ScalingFit::Model model) {
  if (hNorm.size() < 5)
    throw Error("insufficient-samples", "scaling fit needs at least 5 (h, norm) samples");
  double hMin = hNorm.front().first, hMax = hNorm.front().first;
  for (const auto& [h, norm] : hNorm) {
    if (!(h > 0.0 && norm > 0.0))
      throw Error("invalid-parameter", "scaling fit needs positive h and norms");
    hMin = std::min(hMin, h);
    hMax = std::max(hMax, h);
  }
  if (hMax / hMin < 8.0)
    throw Error("insufficient-samples", "scaling fit needs h spanning a factor >= 8");

  const int n = static_cast<int>(hNorm.size());

  // Power: log norm = log C + e log h.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, norm] : hNorm) {
    const double x = std::log(h), y = std::log(norm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double interceptPower = (sy * sxx - sx * sxy) / denom;
  double ssPower = 0.0;
  for (const auto& [h, norm] : hNorm) {
    const double r = std::log(norm) - (interceptPower + slope * std::log(h));
    ssPower += r * r;
  }
  const double residualPower = std::sqrt(ssPower / n);

  // Log: log norm = log C + log(|log h|/h); only the prefactor is fitted.
  double meanOffset = 0.0;
  for (const auto& [h, norm] : hNorm)
    meanOffset += std::log(norm) - std::log(std::fabs(std::log(h)) / h);
  meanOffset /= n;
  double ssLog = 0.0;
  for (const auto& [h, norm] : hNorm) {
    const double r = std::log(norm) - (meanOffset + std::log(std::fabs(std::log(h)) / h));
    ssLog += r * r;
  }
  const double residualLog = std::sqrt(ssLog / n);

  ScalingFit fit;
  fit.model = model;
  fit.residualPower = residualPower;
  fit.residualLog = residualLog;
  fit.hMin = hMin;
  fit.hMax = hMax;
  fit.count = n;
  if (model == ScalingFit::Model::Power) {
    fit.exponent = slope;
    fit.coeff = std::exp(interceptPower);
  } else {
    fit.exponent = 0.0;
    fit.coeff = std::exp(meanOffset);
  }
  return fit;
}

}  // namespace dwlab
