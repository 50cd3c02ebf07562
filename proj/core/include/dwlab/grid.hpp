// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_GRID_HPP
#define DWLAB_GRID_HPP

#include <vector>

#include "dwlab/geometry.hpp"

namespace dwlab {

/// Periodic grid on [-1, 1) with the surface measure A(x) dx attached.
/// warpHalf carries A at the staggered flux points x_j + dx/2.
struct Grid1D {
  int n = 0;
  double dx = 0.0;
  std::vector<double> x;
  std::vector<double> w;         // A(x_j) * dx
  std::vector<double> warp;      // A(x_j)
  std::vector<double> warpHalf;  // A(x_j + dx/2)
  double totalMeasure = 0.0;     // sum of w
};

/// Throws Error("invalid-resolution") for n < 64.
Grid1D build_grid(const WarpedSurface& surface, int n);

/// Resolution policy: next power of two of pointsFactor/h, clamped to
/// [floorN, capN]. The default 32/h keeps ~50 points per wavelength at the
/// characteristic frequency until the cap bites.
int resolution_for(double h, int floorN = 256, int capN = 2048, double pointsFactor = 32.0);

}  // namespace dwlab

#endif
