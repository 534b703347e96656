#include "hrsg/calibrate.hpp"

#include <cmath>

namespace hrsg {

CalibrationReport calibrate_plant(const OperatingPoint& op, const ControlConfig& control,
                                  Scalar tgt_end) {
  const Scalar d4 = op.d4_at(op.tgt_nominal);
  const Scalar d7_nom = op.steam_flow + op.u_nominal;

  if (!(op.setpoint < d4)) {
    throw CalibrationError(
        "setpoint " + std::to_string(op.setpoint) + " degC is not below the DSH inlet temperature " +
        std::to_string(d4) + " degC; spray water can only cool, so the target is unreachable");
  }
  if (!(op.setpoint > op.spray_temp)) {
    throw CalibrationError("setpoint must exceed the spray water temperature");
  }

  CalibrationReport rep;
  rep.constants.sh_rate = 1.0 / (op.sh_time_constant * d7_nom);
  rep.constants.dsh_rate = 1.0 / (op.dsh_time_constant * d7_nom);

  // Fix K1*d1 so the SH outlet sits at the setpoint when the DSH holds its
  // mixing equilibrium at u_nominal.
  const Scalar x2_eq = d4 - op.u_nominal * (d4 - op.spray_temp) / (op.steam_flow + op.u_nominal);
  rep.constants.heat_gain = (op.setpoint - x2_eq) * d7_nom / op.fuel_flow;

  auto steady_y_at = [&](Scalar u, Scalar tgt) {
    DisturbanceFrame f;
    f.fuel_flow = op.fuel_flow;
    f.steam_flow = op.steam_flow;
    f.ambient_rate = 0.0;
    f.dsh_inlet_temp = op.d4_at(tgt);
    f.spray_temp = op.spray_temp;
    f.dsh_inlet_rate = 0.0;
    f.dsh_outlet_flow = op.steam_flow + u;
    f.mean_dsh_inlet_flow = op.steam_flow;
    f.tgt = tgt;
    return steady_state(u, f, rep.constants, 0.0).sh_temp;
  };

  rep.steady_y = steady_y_at(op.u_nominal, op.tgt_nominal);
  rep.steady_y_error = std::abs(rep.steady_y - op.setpoint);
  rep.no_spray_y = steady_y_at(0.0, op.tgt_nominal);
  rep.full_spray_y = steady_y_at(control.u_max, op.tgt_nominal);

  if (!(rep.no_spray_y > op.setpoint)) {
    throw CalibrationError(
        "no-spray steady state " + std::to_string(rep.no_spray_y) +
        " degC does not exceed the setpoint; achievable range is [" +
        std::to_string(rep.full_spray_y) + ", " + std::to_string(rep.no_spray_y) + "] degC");
  }

  // Spray needed to hold the setpoint at the hot end of the exhaust range;
  // reported so scenario designers can check actuator headroom. Steady y is
  // strictly decreasing in u, so bisection is exact enough.
  {
    Scalar lo = control.u_min, hi = control.u_max * 4.0;
    for (int i = 0; i < 200; ++i) {
      const Scalar mid = 0.5 * (lo + hi);
      (steady_y_at(mid, tgt_end) > op.setpoint ? lo : hi) = mid;
    }
    rep.u_equilibrium_ramp_end = 0.5 * (lo + hi);
  }

  return rep;
}

}  // namespace hrsg
