#include "hrsg/pinn_tuner.hpp"

#include <cmath>

#include "hrsg/nn/optim.hpp"
#include "hrsg/rng.hpp"

namespace hrsg {
namespace {

struct LawEval {
  Scalar u_raw = 0.0;
  Scalar u_sat = 0.0;
  GainVector gains;        // clamped triple actually entering the law
  Eigen::Vector3d pass;    // 1 where the box clamp passes gradient, else 0
};

LawEval evaluate_law(const Eigen::Vector3d& net_out, const PinnStepContext& ctx,
                     const GainBox& box, const ControlConfig& control) {
  LawEval ev;
  const GainVector raw = box.denormalize(net_out);
  ev.gains = box.clamp(raw);
  ev.pass[0] = (raw.kp > box.kp_lo && raw.kp < box.kp_hi) ? 1.0 : 0.0;
  ev.pass[1] = (raw.ki > box.ki_lo && raw.ki < box.ki_hi) ? 1.0 : 0.0;
  ev.pass[2] = (raw.kff > box.kff_lo && raw.kff < box.kff_hi) ? 1.0 : 0.0;
  ev.u_raw = ev.gains.kp * ctx.law_e + ev.gains.ki * ctx.integral + ev.gains.kff * ctx.tgt_dev;
  ev.u_sat = clamp_scalar(ev.u_raw, control.u_min, control.u_max);
  return ev;
}

/// Nominal right-hand sides seen by the controller: its own commanded flow,
/// no leak, mass balance closed with that flow.
PlantRates nominal_rates(const PlantState& state, Scalar u, const DisturbanceFrame& frame,
                         const PlantConstants& plant) {
  DisturbanceFrame f = frame;
  f.dsh_outlet_flow = f.steam_flow + u;
  return plant_derivatives(state, u, f, plant, 0.0);
}

Scalar compose_loss(const LawEval& ev, const PinnStepContext& ctx,
                    const PlantConstants& plant, PinnLossBreakdown* breakdown) {
  const Scalar e_hat = ctx.e - ctx.output_gain * (ev.u_sat - ctx.u_applied);
  const Scalar data = 0.5 * e_hat * e_hat;
  const Scalar physics =
      pinn_physics_loss(ctx.x1_rate, ctx.x2_rate, ctx.state, ev.u_raw, ctx.frame, plant);
  const Scalar total = data + ctx.mu * physics;
  if (breakdown) *breakdown = PinnLossBreakdown{data, physics, ctx.mu, total};
  return total;
}

}  // namespace

Scalar pinn_data_loss(Scalar e) { return 0.5 * e * e; }

Scalar pinn_physics_loss(Scalar x1_rate, Scalar x2_rate, const PlantState& state,
                         Scalar u, const DisturbanceFrame& frame,
                         const PlantConstants& plant) {
  const PlantRates f = nominal_rates(state, u, frame, plant);
  const Scalar r1 = x1_rate - f.sh;
  const Scalar r2 = x2_rate - f.dsh;
  return 0.5 * (r1 * r1 + r2 * r2);
}

Scalar pinn_step_loss(const nn::DenseNet& net, const PinnStepContext& ctx,
                      const GainBox& box, const ControlConfig& control,
                      const PlantConstants& plant, PinnLossBreakdown* breakdown) {
  const Vec out = dense_forward(net, ctx.inputs);
  const LawEval ev = evaluate_law(Eigen::Vector3d(out), ctx, box, control);
  return compose_loss(ev, ctx, plant, breakdown);
}

Vec pinn_step_gradient(const nn::DenseNet& net, const PinnStepContext& ctx,
                       const GainBox& box, const ControlConfig& control,
                       const PlantConstants& plant, PinnLossBreakdown* breakdown) {
  nn::DenseTape tape;
  const Vec out = dense_forward(net, ctx.inputs, &tape);
  const LawEval ev = evaluate_law(Eigen::Vector3d(out), ctx, box, control);
  compose_loss(ev, ctx, plant, breakdown);

  // d loss / du, split by the path each term takes.
  const PlantRates f = nominal_rates(ctx.state, ev.u_raw, ctx.frame, plant);
  const Scalar r1 = ctx.x1_rate - f.sh;
  const Scalar r2 = ctx.x2_rate - f.dsh;
  // f1 depends on u through the mass balance, f2 through the mixing terms.
  const Scalar df1_du = plant.sh_rate * (ctx.state.dsh_temp - ctx.state.sh_temp);
  const Scalar df2_du = plant.dsh_rate * (ctx.frame.spray_temp - ctx.state.dsh_temp);
  const Scalar dphys_du_raw = -(r1 * df1_du + r2 * df2_du);

  const bool saturated = (ev.u_sat != ev.u_raw);
  const Scalar e_hat = ctx.e - ctx.output_gain * (ev.u_sat - ctx.u_applied);
  const Scalar ddata_du = saturated ? 0.0 : e_hat * (-ctx.output_gain);

  const Scalar dloss_du = ddata_du + ctx.mu * dphys_du_raw;

  Eigen::Vector3d regressors(ctx.law_e, ctx.integral, ctx.tgt_dev);
  Eigen::Vector3d widths(box.kp_hi - box.kp_lo, box.ki_hi - box.ki_lo,
                         box.kff_hi - box.kff_lo);
  Vec upstream = (dloss_du * regressors.array() * widths.array() * ev.pass.array()).matrix();

  return dense_backward(net, tape, upstream).flatten();
}

nn::DenseNet make_pinn_net(const Config& cfg, std::uint64_t seed) {
  std::vector<int> dims;
  dims.push_back(3);
  for (int h : cfg.pinn.hidden) dims.push_back(h);
  dims.push_back(3);
  nn::DenseNet net = nn::DenseNet::make(dims, seed, "pinn-init", cfg.pinn.init_scale);
  // Warm start: emit the fixed baseline triple before any adaptation.
  const Eigen::Vector3d bias = cfg.gain_box.normalize(cfg.gain_box.clamp(cfg.fixed_gains));
  net.layers.back().b = bias;
  return net;
}

Scalar PinnTuner::output_gain(Scalar u, const DisturbanceFrame& frame,
                              const PlantConstants& plant) {
  const Scalar total = frame.steam_flow + u;
  const Scalar k1d1 = plant.heat_gain * frame.fuel_flow;
  return -((frame.dsh_inlet_temp - frame.spray_temp) * frame.steam_flow +
           (k1d1 - frame.ambient_rate)) /
         (total * total);
}

PinnTuner::PinnTuner(const Config& cfg, std::uint64_t seed)
    : cfg_(cfg), net_(make_pinn_net(cfg, seed)) {}

GainVector PinnTuner::infer(Scalar e, Scalar y, Scalar tgt) const {
  Vec in(3);
  in << cfg_.scaling.norm_e(e), cfg_.scaling.norm_y(y), cfg_.scaling.norm_tgt(tgt);
  const Vec out = dense_forward(net_, in);
  return cfg_.gain_box.clamp(cfg_.gain_box.denormalize(Eigen::Vector3d(out)));
}

GainVector PinnTuner::gains(const LoopObservation& obs) {
  return infer(obs.e, obs.y, obs.tgt);
}

std::optional<PinnLossBreakdown> PinnTuner::post_step(const StepOutcome& outcome) {
  // Backward-difference rate estimates, optionally smoothed.
  rate_history_.emplace_back((outcome.y_next - outcome.y) / outcome.dt,
                             (outcome.x2_next - outcome.x2) / outcome.dt);
  const std::size_t window = std::max(1, cfg_.pinn.rate_smoothing);
  while (rate_history_.size() > window) rate_history_.pop_front();
  Scalar r1 = 0.0, r2 = 0.0;
  for (const auto& [a, b] : rate_history_) {
    r1 += a;
    r2 += b;
  }
  r1 /= rate_history_.size();
  r2 /= rate_history_.size();

  PinnStepContext ctx;
  ctx.inputs << cfg_.scaling.norm_e(outcome.e), cfg_.scaling.norm_y(outcome.y),
      cfg_.scaling.norm_tgt(outcome.tgt);
  ctx.e = outcome.e;
  ctx.law_e = outcome.control.du_dkp;
  ctx.integral = outcome.control.du_dki;
  ctx.tgt_dev = outcome.control.du_dkff;
  ctx.u_applied = outcome.control.u;
  ctx.output_gain = output_gain(outcome.control.u, outcome.frame, cfg_.plant);
  ctx.x1_rate = r1;
  ctx.x2_rate = r2;
  ctx.state = PlantState{outcome.y_next, outcome.x2_next};
  ctx.frame = outcome.frame;
  ctx.mu = cfg_.pinn.mu;

  PinnLossBreakdown breakdown;
  Vec grad = pinn_step_gradient(net_, ctx, cfg_.gain_box, cfg_.control, cfg_.plant,
                                &breakdown);

  if (!std::isfinite(breakdown.total) || !grad.allFinite()) {
    ++skipped_updates_;  // keep the previous parameters, keep running
    return breakdown;
  }
  nn::clip_grad_norm(grad, cfg_.pinn.grad_clip);
  Vec theta = net_.flatten();
  nn::gd_step(theta, grad, cfg_.pinn.eta);
  net_.unflatten(theta);
  return breakdown;
}

ScenarioResult run_pinn_controller(const ScenarioSpec& spec, const Config& cfg) {
  PinnTuner tuner(cfg, derive_seed(cfg.seed, "pinn"));
  return run_scenario(spec, tuner, cfg);
}

}  // namespace hrsg
