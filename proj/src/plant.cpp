#include "hrsg/plant.hpp"

#include <cmath>

namespace hrsg {
namespace {

void check_finite(Scalar v, const char* term) {
  if (!std::isfinite(v)) throw ModelBlowup(term, "value " + std::to_string(v));
}

}  // namespace

void FaultSpec::validate() const {
  if (!(leak_flow >= 0.0 && leak_flow <= max_leak))
    throw std::invalid_argument("fault leak_flow must lie in [0, max_leak]");
  if (!std::isfinite(onset_time)) throw std::invalid_argument("fault onset_time must be finite");
}

void validate_frame(const DisturbanceFrame& d) {
  const Scalar vals[] = {d.fuel_flow,      d.steam_flow,     d.ambient_rate,
                         d.dsh_inlet_temp, d.spray_temp,     d.dsh_inlet_rate,
                         d.dsh_outlet_flow, d.mean_dsh_inlet_flow, d.tgt};
  for (Scalar v : vals)
    if (!std::isfinite(v)) throw std::invalid_argument("disturbance frame has non-finite entry");
  if (!(d.steam_flow > 0.0)) throw std::invalid_argument("steam_flow must be positive");
  if (!(d.dsh_outlet_flow > 0.0)) throw std::invalid_argument("dsh_outlet_flow must be positive");
  if (!(d.dsh_inlet_temp > d.spray_temp))
    throw std::invalid_argument("dsh_inlet_temp must exceed spray_temp");
}

PlantRates plant_derivatives(const PlantState& state, Scalar u,
                             const DisturbanceFrame& d, const PlantConstants& c,
                             Scalar leak) {
  const Scalar w = u + leak;  // total spray reaching the DSH

  const Scalar heat_in = c.heat_gain * d.fuel_flow;
  check_finite(heat_in, "heat_in");
  const Scalar sh_coupling = d.dsh_outlet_flow * (state.dsh_temp - state.sh_temp);
  check_finite(sh_coupling, "sh_coupling");

  const Scalar mix = (d.steam_flow + w) * (d.dsh_inlet_temp - state.dsh_temp);
  check_finite(mix, "dsh_mix");
  const Scalar spray = w * (d.dsh_inlet_temp - d.spray_temp);
  check_finite(spray, "dsh_spray");
  const Scalar inlet_drift = d.mean_dsh_inlet_flow * d.dsh_inlet_rate;
  check_finite(inlet_drift, "dsh_inlet_drift");

  PlantRates r;
  r.sh = c.sh_rate * (heat_in + sh_coupling - d.ambient_rate);
  r.dsh = c.dsh_rate * (mix - spray + inlet_drift);
  check_finite(r.sh, "sh_rate");
  check_finite(r.dsh, "dsh_rate");
  return r;
}

PlantState plant_step(const PlantState& state, Scalar u, const DisturbanceFrame& d,
                      const PlantConstants& c, Scalar leak, Scalar dt,
                      Scalar max_substep) {
  if (!(dt > 0.0)) throw std::invalid_argument("plant_step requires dt > 0");
  const int n = static_cast<int>(std::ceil(dt / max_substep));
  const Scalar h = dt / n;

  PlantState x = state;
  for (int i = 0; i < n; ++i) {
    const PlantRates k1 = plant_derivatives(x, u, d, c, leak);
    PlantState x2{x.sh_temp + 0.5 * h * k1.sh, x.dsh_temp + 0.5 * h * k1.dsh};
    const PlantRates k2 = plant_derivatives(x2, u, d, c, leak);
    PlantState x3{x.sh_temp + 0.5 * h * k2.sh, x.dsh_temp + 0.5 * h * k2.dsh};
    const PlantRates k3 = plant_derivatives(x3, u, d, c, leak);
    PlantState x4{x.sh_temp + h * k3.sh, x.dsh_temp + h * k3.dsh};
    const PlantRates k4 = plant_derivatives(x4, u, d, c, leak);

    x.sh_temp += h / 6.0 * (k1.sh + 2.0 * k2.sh + 2.0 * k3.sh + k4.sh);
    x.dsh_temp += h / 6.0 * (k1.dsh + 2.0 * k2.dsh + 2.0 * k3.dsh + k4.dsh);
  }

  if (!std::isfinite(x.sh_temp) || x.sh_temp < c.temp_min || x.sh_temp > c.temp_max)
    throw ModelBlowup("sh_temp", "left guard band at " + std::to_string(x.sh_temp));
  if (!std::isfinite(x.dsh_temp) || x.dsh_temp < c.temp_min || x.dsh_temp > c.temp_max)
    throw ModelBlowup("dsh_temp", "left guard band at " + std::to_string(x.dsh_temp));
  return x;
}

PlantState steady_state(Scalar u, const DisturbanceFrame& d,
                        const PlantConstants& c, Scalar leak) {
  const Scalar w = u + leak;
  const Scalar total_flow = d.steam_flow + w;
  if (total_flow == 0.0) throw std::invalid_argument("steady_state: steam_flow + u + f is zero");
  if (d.dsh_outlet_flow == 0.0) throw std::invalid_argument("steady_state: dsh_outlet_flow is zero");

  PlantState s;
  s.dsh_temp = d.dsh_inlet_temp -
               (w * (d.dsh_inlet_temp - d.spray_temp) -
                d.mean_dsh_inlet_flow * d.dsh_inlet_rate) /
                   total_flow;
  s.sh_temp = s.dsh_temp +
              (c.heat_gain * d.fuel_flow - d.ambient_rate) / d.dsh_outlet_flow;
  return s;
}

}  // namespace hrsg
