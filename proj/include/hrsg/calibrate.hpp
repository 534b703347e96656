#pragma once

#include "hrsg/config.hpp"

namespace hrsg {

/// Result of solving the plant constants against the operating point:
/// the time constants fix K2 and K3, and the heat gain is chosen so the
/// steady-state output hits the setpoint at the nominal spray flow.
struct CalibrationReport {
  PlantConstants constants;
  Scalar steady_y = 0.0;       // steady output at (u_nominal, tgt_nominal)
  Scalar steady_y_error = 0.0; // |steady_y - setpoint|
  Scalar no_spray_y = 0.0;     // steady output with the valve closed
  Scalar full_spray_y = 0.0;   // steady output at u_max
  Scalar u_equilibrium_ramp_end = 0.0;  // spray holding the setpoint at tgt_end
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solves K1..K3 from the operating point. Throws CalibrationError when the
/// setpoint cannot be held by cooling (it must lie below the DSH inlet
/// temperature and below the no-spray steady state).
CalibrationReport calibrate_plant(const OperatingPoint& op, const ControlConfig& control,
                                  Scalar tgt_end = 560.0);

}  // namespace hrsg
