#pragma once

#include <deque>
#include <memory>
#include <optional>

#include "hrsg/config.hpp"
#include "hrsg/nn/dense.hpp"
#include "hrsg/scenario.hpp"
#include "hrsg/trace.hpp"

namespace hrsg {

/// Everything the per-step online loss depends on besides the network
/// parameters. Freezing this makes the loss a pure function of theta, which
/// is what the finite-difference checks differentiate.
struct PinnStepContext {
  Eigen::Vector3d inputs;   // normalized (e, y, tgt)
  Scalar e = 0.0;           // tracking error r - y [degC]
  Scalar law_e = 0.0;       // error as fed to the control law (wired sign)
  Scalar integral = 0.0;    // integral term used by the law this step
  Scalar tgt_dev = 0.0;     // feedforward regressor
  Scalar u_applied = 0.0;   // saturated actuation that actually drove the plant
  Scalar output_gain = 0.0; // dy*/du at the operating point (model-based)
  Scalar x1_rate = 0.0;     // measured state rates [degC/s]
  Scalar x2_rate = 0.0;
  PlantState state;         // measured states the residual is evaluated at
  DisturbanceFrame frame;   // controller-visible frame (leak excluded)
  Scalar mu = 0.0;
};

/// Tracking loss: 1/2 e^2, with e modeled as a function of the actuation the
/// current parameters would have produced.
Scalar pinn_data_loss(Scalar e);

/// Physics loss: 1/2 (||x1_rate - f1||^2 + ||x2_rate - f2||^2) with f1, f2
/// the nominal (fault-free) right-hand sides at the given actuation.
Scalar pinn_physics_loss(Scalar x1_rate, Scalar x2_rate, const PlantState& state,
                         Scalar u, const DisturbanceFrame& frame,
                         const PlantConstants& plant);

/// The composite per-step loss as a function of parameters; shared by the
/// online update (analytically) and the gradient oracle (by value).
Scalar pinn_step_loss(const nn::DenseNet& net, const PinnStepContext& ctx,
                      const GainBox& box, const ControlConfig& control,
                      const PlantConstants& plant, PinnLossBreakdown* breakdown = nullptr);

/// Exact gradient of pinn_step_loss w.r.t. the flattened parameters:
/// d loss / du through the law regressors, then reverse mode through the MLP.
Vec pinn_step_gradient(const nn::DenseNet& net, const PinnStepContext& ctx,
                       const GainBox& box, const ControlConfig& control,
                       const PlantConstants& plant, PinnLossBreakdown* breakdown = nullptr);

/// Feedforward gain tuner trained online against the composite loss.
class PinnTuner : public GainScheduler {
 public:
  PinnTuner(const Config& cfg, std::uint64_t seed);

  std::string name() const override { return "pinn"; }
  GainVector gains(const LoopObservation& obs) override;
  std::optional<PinnLossBreakdown> post_step(const StepOutcome& outcome) override;

  /// Forward pass only: normalized inputs -> gains clamped into the box.
  GainVector infer(Scalar e, Scalar y, Scalar tgt) const;

  const nn::DenseNet& net() const { return net_; }
  nn::DenseNet& mutable_net() { return net_; }
  long skipped_updates() const { return skipped_updates_; }

  /// Model-based steady-state output sensitivity dy*/du.
  static Scalar output_gain(Scalar u, const DisturbanceFrame& frame,
                            const PlantConstants& plant);

 private:
  Config cfg_;
  nn::DenseNet net_;
  std::deque<std::pair<Scalar, Scalar>> rate_history_;  // recent (x1, x2) diffs
  long skipped_updates_ = 0;
};

/// Warm-started network: small random hidden weights, output bias pinned to
/// the fixed baseline triple in box coordinates.
nn::DenseNet make_pinn_net(const Config& cfg, std::uint64_t seed);

/// Runs the online-tuned controller over a scenario.
ScenarioResult run_pinn_controller(const ScenarioSpec& spec, const Config& cfg);

}  // namespace hrsg
