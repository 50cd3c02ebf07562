// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

Grid1D build_grid(const WarpedSurface& surface, int n) {
  if (n < 64) throw Error("invalid-resolution", "grid needs at least 64 points");
  Grid1D g;
  g.n = n;
  g.dx = 2.0 / n;
  g.x.resize(n);
  g.w.resize(n);
  g.warp.resize(n);
  g.warpHalf.resize(n);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    g.x[j] = -1.0 + j * g.dx;
    g.warp[j] = surface.warpValue(g.x[j]);
    g.warpHalf[j] = surface.warpValue(g.x[j] + 0.5 * g.dx);
    g.w[j] = g.warp[j] * g.dx;
    total += g.w[j];
  }
  g.totalMeasure = total;
  return g;
}

int resolution_for(double h, int floorN, int capN, double pointsFactor) {
  const double target = pointsFactor / h;
  int n = floorN;
  while (n < target && n < capN) n *= 2;
  return std::min(n, capN);
}

}  // namespace dwlab
