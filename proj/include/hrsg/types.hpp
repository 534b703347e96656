#pragma once

#include <Eigen/Dense>

namespace hrsg {

using Scalar = double;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Adaptive controller gain triple: proportional, integral and feedforward.
struct GainVector {
  Scalar kp = 0.0;   // dimensionless
  Scalar ki = 0.0;   // (kg/s) per degC*s of accumulated error
  Scalar kff = 0.0;  // (kg/s) per degC of exhaust-temperature deviation
};

/// Axis-aligned box the tuners are allowed to emit gains in.
struct GainBox {
  Scalar kp_lo = 0.0, kp_hi = 5.0;
  Scalar ki_lo = 0.0, ki_hi = 300.0;
  Scalar kff_lo = -0.1, kff_hi = 0.1;

  GainVector clamp(const GainVector& g) const;
  GainVector center() const;
  /// Maps a gain triple to [0,1]^3 box coordinates (and back).
  Eigen::Vector3d normalize(const GainVector& g) const;
  GainVector denormalize(const Eigen::Vector3d& n) const;
  bool contains(const GainVector& g, Scalar tol = 1e-12) const;
};

inline Scalar clamp_scalar(Scalar v, Scalar lo, Scalar hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace hrsg
