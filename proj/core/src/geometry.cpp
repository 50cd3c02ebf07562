// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#include "dwlab/geometry.hpp"

#include <cmath>

#include "dwlab/errors.hpp"

namespace dwlab {

double wrap_to_cell(double x) {
  double r = std::fmod(x + 1.0, 2.0);
  if (r < 0.0) r += 2.0;
  return r - 1.0;
}

namespace {

// Integer power, safe for negative bases.
double ipow(double base, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= base;
  return out;
}

struct StepEval {
  double s, d1, d2;
};

StepEval step_eval(double t, double c) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const double g = std::exp(-c / t);
  const double h = std::exp(-c / (1.0 - t));
  const double gp = g * c / (t * t);
  const double hp = -h * c / ((1.0 - t) * (1.0 - t));
  const double gpp = g * (c * c / ipow(t, 4) - 2.0 * c / ipow(t, 3));
  const double hpp = h * (c * c / ipow(1.0 - t, 4) - 2.0 * c / ipow(1.0 - t, 3));
  const double D = g + h;
  const double W = gp * h - g * hp;
  const double s = g / D;
  const double d1 = W / (D * D);
  const double d2 = (gpp * h - g * hpp) / (D * D) - 2.0 * (gp + hp) * W / (D * D * D);
  return {s, d1, d2};
}

}  // namespace

double smoothstep(double t, double sharpness) { return step_eval(t, sharpness).s; }
double smoothstep_d1(double t, double sharpness) { return step_eval(t, sharpness).d1; }
double smoothstep_d2(double t, double sharpness) { return step_eval(t, sharpness).d2; }

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::TorusFamily: return "torus";
    case SurfaceKind::Peanut: return "peanut";
    case SurfaceKind::Flat: return "flat";
  }
  return "?";
}

SurfaceKind surface_kind_from_string(const std::string& name) {
  if (name == "torus" || name == "torus-family") return SurfaceKind::TorusFamily;
  if (name == "peanut") return SurfaceKind::Peanut;
  if (name == "flat") return SurfaceKind::Flat;
  throw Error("invalid-parameter", "unknown surface kind '" + name + "'");
}

WarpedSurface::WarpedSurface(SurfaceKind kind, int m) : kind_(kind), m_(m) {}

WarpedSurface WarpedSurface::build(SurfaceKind kind, int m) {
  if (m < 1) throw Error("invalid-parameter", "degeneracy order m must be an integer >= 1");
  if (kind == SurfaceKind::Peanut) m = 1;

  WarpedSurface s(kind, m);
  switch (kind) {
    case SurfaceKind::TorusFamily:
      s.kappa_ = ipow(2.0 / M_PI, 2 * m);
      s.max_warp_ = std::pow(1.0 + s.kappa_, 1.0 / (2.0 * m));
      break;
    case SurfaceKind::Peanut: {
      PeanutBlend b;
      b.capValue = std::cosh(1.0);
      s.blend_ = b;
      s.max_warp_ = b.capValue;
      break;
    }
    case SurfaceKind::Flat:
      s.max_warp_ = 1.0;
      break;
  }
  return s;
}

WarpEval WarpedSurface::warp(double x) const {
  x = wrap_to_cell(x);

  if (kind_ == SurfaceKind::Flat) return {1.0, 0.0, 0.0};

  if (kind_ == SurfaceKind::TorusFamily) {
    // A = u^p, u = 1 + kappa sin^{2m}(pi x/2), p = 1/(2m).
    const double s = std::sin(0.5 * M_PI * x);
    const double c = std::cos(0.5 * M_PI * x);
    const int m = m_;
    const double p = 1.0 / (2.0 * m);
    const double u = 1.0 + kappa_ * ipow(s, 2 * m);
    const double du = kappa_ * m * M_PI * ipow(s, 2 * m - 1) * c;
    const double d2u = kappa_ * m * M_PI * M_PI * 0.5 *
                       ((2 * m - 1) * ipow(s, 2 * m - 2) * c * c - ipow(s, 2 * m));
    const double A = std::pow(u, p);
    const double dA = p * std::pow(u, p - 1.0) * du;
    const double d2A = p * (p - 1.0) * std::pow(u, p - 2.0) * du * du +
                       p * std::pow(u, p - 1.0) * d2u;
    return {A, dA, d2A};
  }

  // Peanut: even in x, so evaluate in r = |x| and restore the sign of dA.
  const PeanutBlend& b = *blend_;
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double r = std::fabs(x);
  double A, dAr, d2Ar;
  if (r >= b.blendEnd) {
    A = b.capValue;
    dAr = 0.0;
    d2Ar = 0.0;
  } else if (r <= b.blendStart) {
    A = std::cosh(r);
    dAr = std::sinh(r);
    d2Ar = std::cosh(r);
  } else {
    const double w = b.blendEnd - b.blendStart;
    const StepEval st = step_eval((r - b.blendStart) / w, 1.0);
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    A = ch + (b.capValue - ch) * st.s;
    dAr = sh * (1.0 - st.s) + (b.capValue - ch) * st.d1 / w;
    d2Ar = ch * (1.0 - st.s) - 2.0 * sh * st.d1 / w + (b.capValue - ch) * st.d2 / (w * w);
  }
  return {A, sign * dAr, d2Ar};
}

std::string to_string(ProfileName name) {
  switch (name) {
    case ProfileName::Damping: return "a";
    case ProfileName::Absorption: return "W";
    case ProfileName::Chi: return "chi";
    case ProfileName::B1: return "B1";
    case ProfileName::Phi: return "phi";
  }
  return "?";
}

Profile::Profile(ProfileName name, double riseStart, double riseEnd, double fallStart,
                 double fallEnd, double plateau, double sharpness)
    : name_(name),
      rise_start_(riseStart),
      rise_end_(riseEnd),
      fall_start_(fallStart),
      fall_end_(fallEnd),
      plateau_(plateau),
      sharpness_(sharpness) {
  if (!(0.0 <= riseStart && riseStart <= riseEnd && riseEnd <= fallStart &&
        fallStart <= fallEnd) ||
      plateau < 0.0 || sharpness <= 0.0)
    throw Error("invalid-parameter", "profile knots must satisfy 0 <= rs <= re <= fs <= fe");
}

double Profile::operator()(double x) const {
  const double r = std::fabs(wrap_to_cell(x));
  if (plateau_ == 0.0) return 0.0;
  if (r >= fall_end_ && fall_end_ < 1.0) return 0.0;
  if (r <= rise_start_ && rise_end_ > rise_start_) return 0.0;
  double v = plateau_;
  if (r < rise_end_ && rise_end_ > rise_start_)
    v *= smoothstep((r - rise_start_) / (rise_end_ - rise_start_), sharpness_);
  if (r > fall_start_ && fall_end_ > fall_start_)
    v *= 1.0 - smoothstep((r - fall_start_) / (fall_end_ - fall_start_), sharpness_);
  return v;
}

Profile::Support Profile::support() const {
  Support s;
  if (plateau_ == 0.0) {
    s.inner = 1.0;
    s.outer = 0.0;
    return s;
  }
  s.inner = rise_end_ > rise_start_ ? rise_start_ : 0.0;
  s.outer = fall_end_ > fall_start_ && fall_end_ < 1.0 ? fall_end_ : 1.0;
  return s;
}

Profile make_profile(ProfileName name, double riseStart, double riseEnd, double fallStart,
                     double fallEnd, double plateau, double sharpness,
                     double forbiddenRadius) {
  if (name == ProfileName::Damping || name == ProfileName::Absorption) {
    const bool clears_neck = (riseEnd > riseStart && riseStart >= forbiddenRadius);
    if (forbiddenRadius > 0.0 && !clears_neck)
      throw Error("invalid-support",
                  to_string(name) + " must vanish on |x| <= " + std::to_string(forbiddenRadius));
  }
  return Profile(name, riseStart, riseEnd, fallStart, fallEnd, plateau, sharpness);
}

ProfileSet build_standard_profiles(const ProfileParams& p) {
  if (!(p.v1Radius < p.b1Outer && p.b1Outer < p.dampInner && p.dampInner < p.dampFull &&
        p.dampFull < 1.0))
    throw Error("invalid-parameter",
                "profile radii must nest: v1 < b1Outer < dampInner < dampFull < 1");

  ProfileSet set;
  set.a = make_profile(ProfileName::Damping, p.dampInner, p.dampFull, 1.0, 1.0, p.plateau,
                       p.sharpness, p.forbiddenRadius);
  set.W = make_profile(ProfileName::Absorption, p.dampInner, p.dampFull, 1.0, 1.0, p.plateau,
                       p.sharpness, p.forbiddenRadius);

  // eps0 by sampling the built profile, not by assumption.
  double eps0 = 0.0;
  const int samples = 4096;
  for (int j = 0; j < samples; ++j) {
    const double x = -1.0 + 2.0 * (j + 0.5) / samples;
    eps0 = std::max(eps0, set.a(x));
  }
  set.eps0 = eps0;

  // chi = 1 wherever a >= eps0, supp chi inside {a > eps0/2}. The rise starts
  // at the bisected radius of a == 0.6 eps0 and completes where a has already
  // reached eps0 up to rounding (the plateau edge is fuzzy in doubles because
  // the exp-step underflows to 1 slightly early).
  auto level_radius = [&](double level) {
    double lo = p.dampInner, hi = p.dampFull;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (set.a(mid) < level ? lo : hi) = mid;
    }
    return hi;
  };
  const double riseStart = level_radius(0.6 * eps0);
  const double riseEnd = level_radius((1.0 - 1e-9) * eps0);
  set.chi = Profile(ProfileName::Chi, riseStart, riseEnd, 1.0, 1.0, 1.0, p.sharpness);

  set.B1 = Profile(ProfileName::B1, 0.0, 0.0, p.v1Radius, p.b1Outer, 1.0, p.sharpness);
  set.phi = Profile(ProfileName::Phi, 0.5 * p.v1Radius, p.v1Radius, p.b1Outer,
                    std::min(p.dampFull, p.b1Outer + 0.1), 1.0, p.sharpness);

  set.O1Radius = p.dampInner;
  set.V1Radius = p.v1Radius;
  set.uniform = false;
  return set;
}

ProfileSet build_uniform_damping(double a0) {
  if (a0 <= 0.0) throw Error("invalid-parameter", "uniform damping level must be positive");
  ProfileSet set;
  set.a = Profile(ProfileName::Damping, 0.0, 0.0, 1.0, 1.0, a0);
  set.W = Profile(ProfileName::Absorption, 0.0, 0.0, 1.0, 1.0, a0);
  set.chi = Profile(ProfileName::Chi, 0.0, 0.0, 1.0, 1.0, 1.0);
  set.B1 = Profile(ProfileName::B1, 0.0, 0.0, 0.0, 0.0, 0.0);
  set.phi = Profile(ProfileName::Phi, 0.0, 0.0, 0.0, 0.0, 0.0);
  set.eps0 = a0;
  set.O1Radius = 0.0;
  set.V1Radius = 0.0;
  set.uniform = true;
  return set;
}

}  // namespace dwlab
