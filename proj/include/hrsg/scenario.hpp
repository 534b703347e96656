#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hrsg/config.hpp"
#include "hrsg/control.hpp"
#include "hrsg/metrics.hpp"
#include "hrsg/plant.hpp"
#include "hrsg/trace.hpp"

namespace hrsg {

/// Piecewise-linear schedule; evaluation clamps to the endpoint values.
struct PiecewiseLinear {
  std::vector<std::pair<Scalar, Scalar>> points;  // (t, value), t ascending

  Scalar at(Scalar t) const;
  static PiecewiseLinear constant(Scalar v);
  static PiecewiseLinear ramp(Scalar t0, Scalar v0, Scalar t1, Scalar v1);
};

struct ScenarioSpec {
  std::string name = "custom";
  Scalar duration = 3600.0;
  Scalar dt = 1.0;
  PiecewiseLinear setpoint;
  PiecewiseLinear tgt;
  PiecewiseLinear load_mw;  // informational mirror of the exhaust ramp
  FaultSpec fault;
  Scalar noise_sigma = 0.0;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Combined load-ramp plus valve-leakage benchmark case.
ScenarioSpec build_paper_scenario(const Config& cfg);
/// Constant setpoint and exhaust temperature, no fault: pure regulation.
ScenarioSpec build_null_scenario(const Config& cfg);

ScenarioSpec scenario_from_json_text(const std::string& text, const Config& cfg);
ScenarioSpec load_scenario(const std::string& path, const Config& cfg);
std::string scenario_to_json_text(const ScenarioSpec& spec);

/// What a gain scheduler sees before each control decision.
struct LoopObservation {
  Scalar t = 0.0;
  Scalar r = 0.0;
  Scalar y = 0.0;      // measured SH outlet
  Scalar e = 0.0;      // r - y
  Scalar x2 = 0.0;     // measured DSH outlet
  Scalar tgt = 0.0;
  Scalar prev_u = 0.0;
};

/// Everything a scheduler may use after the plant advanced one interval.
struct StepOutcome {
  Scalar t = 0.0;
  Scalar dt = 1.0;
  Scalar r = 0.0;
  Scalar e = 0.0;          // r - y at decision time
  Scalar y = 0.0;          // measurement the decision was based on
  Scalar y_next = 0.0;     // measurement that will be seen at t + dt
  Scalar x2 = 0.0;         // measured DSH outlet at decision time
  Scalar x2_next = 0.0;
  Scalar tgt = 0.0;
  DisturbanceFrame frame;  // as applied to the plant, minus the leak in d7
  ControlResult control;   // applied actuation and its regressors
};

class GainScheduler {
 public:
  virtual ~GainScheduler() = default;
  virtual std::string name() const = 0;
  /// Gains for the upcoming interval. Must be a pure function of the
  /// observation and the scheduler's current state.
  virtual GainVector gains(const LoopObservation& obs) = 0;
  /// Called once after each completed interval; returns a loss breakdown
  /// when the scheduler trains online.
  virtual std::optional<PinnLossBreakdown> post_step(const StepOutcome&) {
    return std::nullopt;
  }
};

class FixedGainScheduler : public GainScheduler {
 public:
  explicit FixedGainScheduler(const GainVector& g, std::string name = "pi")
      : gains_(g), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  GainVector gains(const LoopObservation&) override { return gains_; }

 private:
  GainVector gains_;
  std::string name_;
};

/// The conventional fixed-gain baseline.
std::unique_ptr<GainScheduler> fixed_pi_controller();

struct ScenarioResult {
  Trace trace;
  bool completed = false;
  std::string error;  // set when the run aborted (partial trace retained)
};

ScenarioResult run_scenario(const ScenarioSpec& spec, GainScheduler& scheduler,
                            const Config& cfg);

struct ComparisonEntry {
  std::string controller;
  ScenarioResult result;
  KpiRow kpis;  // valid when result.completed
};

struct ComparisonBundle {
  std::vector<ComparisonEntry> entries;
  bool all_completed = true;
};

/// Runs every controller on the identical spec and seed.
ComparisonBundle run_comparison(const ScenarioSpec& spec,
                                const std::vector<GainScheduler*>& controllers,
                                const Config& cfg);

/// Spray flow that holds the scheduled setpoint at the initial exhaust
/// temperature; used for equilibrium starts.
Scalar equilibrium_spray(const ScenarioSpec& spec, const Config& cfg);

}  // namespace hrsg
