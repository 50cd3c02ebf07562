// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_GEOMETRY_HPP
#define DWLAB_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

namespace dwlab {

/// Reduce x to the periodic cell [-1, 1).
double wrap_to_cell(double x);

/// C-infinity step built from exp(-sharpness/t): 0 for t <= 0, 1 for t >= 1.
double smoothstep(double t, double sharpness = 1.0);
double smoothstep_d1(double t, double sharpness = 1.0);
double smoothstep_d2(double t, double sharpness = 1.0);

enum class SurfaceKind {
  TorusFamily,  // warp (1 + kappa sin^{2m}(pi x/2))^{1/(2m)}, kappa = (2/pi)^{2m}
  Peanut,       // cosh warp near the neck, blended to a constant cap
  Flat,         // A == 1 everywhere; diagnostic member of the family
};

std::string to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(const std::string& name);

struct WarpEval {
  double A;
  double dA;
  double d2A;
};

/// Surface of revolution over the periodic cell x in [-1, 1) with metric
/// dx^2 + A(x)^2 dtheta^2. A is smooth, even, periodic, positive, and attains
/// its minimum 1 at x = 0 (except the Flat diagnostic, where A == 1).
class WarpedSurface {
 public:
  /// Peanut blend: A = cosh(|x|) exactly for |x| <= blendStart, smoothstepped
  /// on [blendStart, blendEnd] to the constant capValue = cosh(1) afterwards.
  struct PeanutBlend {
    double blendStart = 0.55;
    double blendEnd = 0.90;
    double capValue = 0.0;  // cosh(1)
  };

  static WarpedSurface build(SurfaceKind kind, int m);
  static WarpedSurface flat() { return build(SurfaceKind::Flat, 1); }

  SurfaceKind kind() const { return kind_; }
  /// Order of degeneracy of the neck; the peanut behaves as m = 1.
  int degeneracyOrder() const { return m_; }
  double period() const { return 2.0; }

  WarpEval warp(double x) const;
  double warpValue(double x) const { return warp(x).A; }

  double maxWarp() const { return max_warp_; }
  double minWarp() const { return 1.0; }

  const std::optional<PeanutBlend>& peanutBlend() const { return blend_; }

 private:
  WarpedSurface(SurfaceKind kind, int m);

  SurfaceKind kind_;
  int m_;
  double kappa_ = 0.0;
  std::optional<PeanutBlend> blend_;
  double max_warp_ = 1.0;
};

enum class ProfileName { Damping, Absorption, Chi, B1, Phi };

std::string to_string(ProfileName name);

/// Smooth nonnegative axisymmetric coefficient, even in x, built from
/// exp(-1/t) transitions. In r = |x| the shape is a trapezoid:
///   0 on [0, riseStart], rise on [riseStart, riseEnd], plateau on
///   [riseEnd, fallStart], fall on [fallStart, fallEnd], 0 afterwards.
/// riseStart == riseEnd == 0 starts at the plateau (no inner hole);
/// fallStart >= 1 means the plateau runs to the seam.
class Profile {
 public:
  Profile() = default;
  Profile(ProfileName name, double riseStart, double riseEnd, double fallStart,
          double fallEnd, double plateau, double sharpness = 1.0);

  double operator()(double x) const;
  double plateau() const { return plateau_; }
  ProfileName name() const { return name_; }
  bool isUniform() const { return rise_start_ == 0.0 && rise_end_ == 0.0 && fall_start_ >= 1.0; }

  struct Support {
    double inner = 0.0;  // largest r with profile == 0 on [0, inner]
    double outer = 1.0;  // profile == 0 for r >= outer (1 if reaches the seam)
  };
  Support support() const;

  double riseStart() const { return rise_start_; }
  double riseEnd() const { return rise_end_; }
  double fallStart() const { return fall_start_; }
  double fallEnd() const { return fall_end_; }

 private:
  ProfileName name_ = ProfileName::Damping;
  double rise_start_ = 0.0;
  double rise_end_ = 0.0;
  double fall_start_ = 1.0;
  double fall_end_ = 1.0;
  double plateau_ = 1.0;
  double sharpness_ = 1.0;
};

/// Validated constructor. Damping/absorption profiles must vanish on the
/// declared forbidden neighborhood of the neck (|x| <= forbiddenRadius);
/// violating it throws Error("invalid-support").
Profile make_profile(ProfileName name, double riseStart, double riseEnd,
                     double fallStart, double fallEnd, double plateau,
                     double sharpness, double forbiddenRadius);

struct ProfileParams {
  double dampInner = 0.30;       // a == 0 on |x| <= dampInner
  double dampFull = 0.50;        // a == plateau on dampFull <= |x| <= 1
  double plateau = 1.0;
  double sharpness = 1.0;
  double forbiddenRadius = 0.20; // damping/absorption keep-out around the neck
  double v1Radius = 0.15;        // B1 == 1 on |x| < v1Radius
  double b1Outer = 0.28;         // supp B1 inside |x| < dampInner
};

/// The standard coefficient family used throughout: damping a and absorption W
/// share the trapezoid, chi is cut from a via the sampled eps0 rule, B1 and phi
/// nest inside the undamped neck (B1 == 1 on V1, phi == 1 on supp grad B1 and
/// phi == 0 near x = 0).
struct ProfileSet {
  Profile a;
  Profile W;
  Profile chi;
  Profile B1;
  Profile phi;
  double eps0 = 0.0;       // sampled max of a
  double O1Radius = 0.0;   // a == 0 on |x| <= O1Radius
  double V1Radius = 0.0;   // B1 == 1 on |x| <= V1Radius
  bool uniform = false;    // GCC configuration, a == const > 0
};

ProfileSet build_standard_profiles(const ProfileParams& params = {});

/// GCC configuration: a == W == a0 everywhere (no undamped set). chi == 1,
/// B1 == phi == 0 are placeholders kept for interface uniformity.
ProfileSet build_uniform_damping(double a0);

}  // namespace dwlab

#endif
