#pragma once

#include "hrsg/types.hpp"

namespace hrsg {

/// PI-plus-feedforward configuration shared by all controllers.
struct ControlConfig {
  Scalar u_min = 0.0;            // spray valve limits [kg/s]
  Scalar u_max = 2.0;
  Scalar integral_clamp = 50.0;  // |accumulated error| bound [degC*s]
  Scalar tgt_nominal = 530.0;    // feedforward regressor is tgt - tgt_nominal
};

struct ControllerState {
  Scalar integral = 0.0;     // accumulated error [degC*s]
  Scalar last_u_unsat = 0.0; // [kg/s]
  Scalar last_u_sat = 0.0;   // [kg/s]
};

/// One evaluation of the control law, with everything the online tuner
/// needs to differentiate u with respect to the gains.
struct ControlResult {
  Scalar u = 0.0;        // saturated actuation [kg/s]
  Scalar u_unsat = 0.0;  // raw law output [kg/s]
  bool saturated = false;
  // Partial derivatives of u_unsat w.r.t. (kp, ki, kff): the regressors.
  Scalar du_dkp = 0.0;   // = e as fed to the law
  Scalar du_dki = 0.0;   // = integral used this step
  Scalar du_dkff = 0.0;  // = tgt deviation
  ControllerState state; // post-step controller state
};

/// u_unsat = kp*e + ki*I + kff*(tgt - tgt_nominal), saturated into
/// [u_min, u_max]. The integral accumulates e*dt afterwards with
/// conditional anti-windup: accumulation is skipped when the raw output
/// is saturated and e would push it further past the active bound.
/// The error argument is whatever sign convention the caller wires in;
/// the law itself is sign-agnostic.
ControlResult compute_control(const GainVector& gains, Scalar e,
                              const ControllerState& cstate, Scalar tgt,
                              Scalar dt, const ControlConfig& cfg);

/// Manually tuned fixed baseline gains.
GainVector fixed_pi_gains();

}  // namespace hrsg
