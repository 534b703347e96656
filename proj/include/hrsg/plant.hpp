#pragma once

#include <stdexcept>
#include <string>

#include "hrsg/types.hpp"

namespace hrsg {

/// Lumped two-state model of the superheater (SH) / desuperheater (DSH)
/// string. State x1 is the SH outlet temperature (the measured output),
/// x2 the DSH outlet temperature; the DSH feeds the SH.
struct PlantState {
  Scalar sh_temp = 0.0;   // x1 [degC]
  Scalar dsh_temp = 0.0;  // x2 [degC]
};

struct PlantConstants {
  Scalar heat_gain = -33.0;       // K1: lumped fuel-to-heat gain (sign free, see calibrate)
  Scalar sh_rate = 1.5197568389057750e-4;   // K2 > 0: SH thermal rate
  Scalar dsh_rate = 5.0658561296859168e-4;  // K3 > 0: DSH thermal rate
  Scalar temp_min = 0.0;    // blow-up guard band [degC]
  Scalar temp_max = 700.0;
};

/// Exogenous signals sampled once per control interval and held during
/// integration of that interval.
struct DisturbanceFrame {
  Scalar fuel_flow = 1.0;        // d1 [kg/s]
  Scalar steam_flow = 65.0;      // d2 [kg/s]
  Scalar ambient_rate = 0.0;     // d3 [degC/s]
  Scalar dsh_inlet_temp = 520.0; // d4 [degC]
  Scalar spray_temp = 150.0;     // d5 [degC]
  Scalar dsh_inlet_rate = 0.0;   // d6 [degC/s]
  Scalar dsh_outlet_flow = 65.8; // d7 [kg/s]
  Scalar mean_dsh_inlet_flow = 65.0;  // [kg/s]
  Scalar tgt = 530.0;            // gas-turbine exhaust temperature [degC]
};

/// Uncommanded constant spray flow, active from onset_time onward.
struct FaultSpec {
  Scalar leak_flow = 0.0;   // f [kg/s]
  Scalar onset_time = 0.0;  // [s]
  Scalar max_leak = 1.0;    // f_max [kg/s]

  Scalar flow_at(Scalar t) const { return t >= onset_time ? leak_flow : 0.0; }
  void validate() const;
};

struct PlantRates {
  Scalar sh = 0.0;   // dx1/dt [degC/s]
  Scalar dsh = 0.0;  // dx2/dt [degC/s]
};

/// Raised when the model produces a non-finite value or the state leaves
/// the guard band; carries the name of the offending term.
class ModelBlowup : public std::runtime_error {
 public:
  explicit ModelBlowup(const std::string& term, const std::string& detail)
      : std::runtime_error("model blow-up in term '" + term + "': " + detail),
        term_(term) {}
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

/// Right-hand sides of the state equations. The leak enters the DSH energy
/// balance additively with the commanded spray, so (u + f) is formed once
/// and used everywhere; the SH equation sees the leak only through d.dsh_outlet_flow.
PlantRates plant_derivatives(const PlantState& state, Scalar u,
                             const DisturbanceFrame& d, const PlantConstants& c,
                             Scalar leak);

/// Advances the state by dt with fixed-step RK4, internal substeps <= max_substep.
/// Disturbances and control are held constant over the interval.
PlantState plant_step(const PlantState& state, Scalar u, const DisturbanceFrame& d,
                      const PlantConstants& c, Scalar leak, Scalar dt,
                      Scalar max_substep = 0.25);

/// Closed-form fixed point of the dynamics for constant inputs.
PlantState steady_state(Scalar u, const DisturbanceFrame& d,
                        const PlantConstants& c, Scalar leak);

void validate_frame(const DisturbanceFrame& d);

}  // namespace hrsg
