#include "hrsg/control.hpp"

namespace hrsg {

GainVector GainBox::clamp(const GainVector& g) const {
  return {clamp_scalar(g.kp, kp_lo, kp_hi), clamp_scalar(g.ki, ki_lo, ki_hi),
          clamp_scalar(g.kff, kff_lo, kff_hi)};
}

GainVector GainBox::center() const {
  return {0.5 * (kp_lo + kp_hi), 0.5 * (ki_lo + ki_hi), 0.5 * (kff_lo + kff_hi)};
}

Eigen::Vector3d GainBox::normalize(const GainVector& g) const {
  return {(g.kp - kp_lo) / (kp_hi - kp_lo), (g.ki - ki_lo) / (ki_hi - ki_lo),
          (g.kff - kff_lo) / (kff_hi - kff_lo)};
}

GainVector GainBox::denormalize(const Eigen::Vector3d& n) const {
  return {kp_lo + n[0] * (kp_hi - kp_lo), ki_lo + n[1] * (ki_hi - ki_lo),
          kff_lo + n[2] * (kff_hi - kff_lo)};
}

bool GainBox::contains(const GainVector& g, Scalar tol) const {
  return g.kp >= kp_lo - tol && g.kp <= kp_hi + tol && g.ki >= ki_lo - tol &&
         g.ki <= ki_hi + tol && g.kff >= kff_lo - tol && g.kff <= kff_hi + tol;
}

ControlResult compute_control(const GainVector& gains, Scalar e,
                              const ControllerState& cstate, Scalar tgt,
                              Scalar dt, const ControlConfig& cfg) {
  const Scalar tgt_dev = tgt - cfg.tgt_nominal;

  ControlResult r;
  r.du_dkp = e;
  r.du_dki = cstate.integral;
  r.du_dkff = tgt_dev;
  r.u_unsat = gains.kp * e + gains.ki * cstate.integral + gains.kff * tgt_dev;
  r.u = clamp_scalar(r.u_unsat, cfg.u_min, cfg.u_max);
  r.saturated = (r.u != r.u_unsat);

  // Conditional anti-windup: freeze while saturated in the error's direction.
  const bool freeze = (r.u_unsat > cfg.u_max && e > 0.0) ||
                      (r.u_unsat < cfg.u_min && e < 0.0);
  Scalar integral = cstate.integral;
  if (!freeze) {
    integral = clamp_scalar(integral + e * dt, -cfg.integral_clamp, cfg.integral_clamp);
  }

  r.state = ControllerState{integral, r.u_unsat, r.u};
  return r;
}

GainVector fixed_pi_gains() { return {1.2, 105.0, 0.0}; }

}  // namespace hrsg
