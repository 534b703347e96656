#include "hrsg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hrsg/rng.hpp"

namespace hrsg {

using nlohmann::json;

Scalar PiecewiseLinear::at(Scalar t) const {
  if (points.empty()) throw std::invalid_argument("empty schedule");
  if (t <= points.front().first) return points.front().second;
  if (t >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t <= points[i].first) {
      const auto& [t0, v0] = points[i - 1];
      const auto& [t1, v1] = points[i];
      if (t1 == t0) return v1;
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  return points.back().second;
}

PiecewiseLinear PiecewiseLinear::constant(Scalar v) { return {{{0.0, v}}}; }

PiecewiseLinear PiecewiseLinear::ramp(Scalar t0, Scalar v0, Scalar t1, Scalar v1) {
  return {{{t0, v0}, {t1, v1}}};
}

void ScenarioSpec::validate() const {
  if (!(duration > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("scenario duration and dt must be positive");
  if (setpoint.points.empty() || tgt.points.empty())
    throw std::invalid_argument("scenario schedules must be non-empty");
  for (const auto& sched : {setpoint, tgt})
    for (std::size_t i = 1; i < sched.points.size(); ++i)
      if (sched.points[i].first < sched.points[i - 1].first)
        throw std::invalid_argument("schedule breakpoints must be ascending");
  for (Scalar t = 0.0; t <= duration; t += duration / 64.0) {
    const Scalar g = tgt.at(t);
    if (g < 530.0 - 1e-9 || g > 580.0 + 1e-9)
      throw std::invalid_argument("exhaust temperature schedule leaves [530, 580] degC");
  }
  fault.validate();
  if (noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be >= 0");
}

ScenarioSpec build_paper_scenario(const Config& cfg) {
  const ScenarioConfig& sc = cfg.scenario;
  ScenarioSpec spec;
  spec.name = "paper";
  spec.duration = sc.duration;
  spec.setpoint = PiecewiseLinear::constant(sc.setpoint);
  spec.tgt = {{{0.0, sc.tgt_start},
               {sc.ramp_start, sc.tgt_start},
               {sc.ramp_start + sc.ramp_seconds, sc.tgt_end},
               {sc.duration, sc.tgt_end}}};
  spec.load_mw = {{{0.0, 0.0},
                   {sc.ramp_start, 0.0},
                   {sc.ramp_start + sc.ramp_seconds, (sc.tgt_end - sc.tgt_start) * sc.mw_per_degc},
                   {sc.duration, (sc.tgt_end - sc.tgt_start) * sc.mw_per_degc}}};
  spec.fault = FaultSpec{sc.leak_flow, sc.leak_onset, sc.leak_max};
  spec.noise_sigma = sc.noise_sigma;
  spec.seed = cfg.seed;
  spec.validate();
  return spec;
}

ScenarioSpec build_null_scenario(const Config& cfg) {
  ScenarioSpec spec;
  spec.name = "null";
  spec.duration = cfg.scenario.duration;
  spec.setpoint = PiecewiseLinear::constant(cfg.scenario.setpoint);
  spec.tgt = PiecewiseLinear::constant(cfg.scenario.tgt_start);
  spec.load_mw = PiecewiseLinear::constant(0.0);
  spec.fault = FaultSpec{0.0, 0.0, cfg.scenario.leak_max};
  spec.noise_sigma = 0.0;
  spec.seed = cfg.seed;
  spec.validate();
  return spec;
}

namespace {

PiecewiseLinear schedule_from_json(const json& arr, const char* what) {
  if (!arr.is_array() || arr.empty())
    throw std::invalid_argument(std::string("scenario ") + what +
                                " must be a non-empty [[t, v], ...] array");
  PiecewiseLinear pl;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2)
      throw std::invalid_argument(std::string("scenario ") + what + " entries must be [t, v]");
    pl.points.emplace_back(p[0].get<Scalar>(), p[1].get<Scalar>());
  }
  return pl;
}

json schedule_to_json(const PiecewiseLinear& pl) {
  json arr = json::array();
  for (const auto& [t, v] : pl.points) arr.push_back({t, v});
  return arr;
}

}  // namespace

ScenarioSpec scenario_from_json_text(const std::string& text, const Config& cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw std::invalid_argument(std::string("scenario is not valid JSON: ") + ex.what());
  }
  ScenarioSpec spec;
  spec.seed = cfg.seed;
  if (j.contains("name")) spec.name = j.at("name").get<std::string>();
  if (j.contains("duration")) spec.duration = j.at("duration").get<Scalar>();
  if (j.contains("dt")) spec.dt = j.at("dt").get<Scalar>();
  spec.setpoint = j.contains("setpoint") ? schedule_from_json(j.at("setpoint"), "setpoint")
                                         : PiecewiseLinear::constant(cfg.scenario.setpoint);
  spec.tgt = j.contains("tgt") ? schedule_from_json(j.at("tgt"), "tgt")
                               : PiecewiseLinear::constant(cfg.scenario.tgt_start);
  spec.load_mw = j.contains("load_mw") ? schedule_from_json(j.at("load_mw"), "load_mw")
                                       : PiecewiseLinear::constant(0.0);
  if (j.contains("fault")) {
    const auto& f = j.at("fault");
    spec.fault.leak_flow = f.value("leak_flow", 0.0);
    spec.fault.onset_time = f.value("onset_time", 0.0);
    spec.fault.max_leak = f.value("max_leak", cfg.scenario.leak_max);
  }
  if (j.contains("noise_sigma")) spec.noise_sigma = j.at("noise_sigma").get<Scalar>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(const std::string& path, const Config& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json_text(ss.str(), cfg);
}

std::string scenario_to_json_text(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["duration"] = spec.duration;
  j["dt"] = spec.dt;
  j["setpoint"] = schedule_to_json(spec.setpoint);
  j["tgt"] = schedule_to_json(spec.tgt);
  j["load_mw"] = schedule_to_json(spec.load_mw);
  j["fault"] = {{"leak_flow", spec.fault.leak_flow},
                {"onset_time", spec.fault.onset_time},
                {"max_leak", spec.fault.max_leak}};
  j["noise_sigma"] = spec.noise_sigma;
  j["seed"] = spec.seed;
  return j.dump(2) + "\n";
}

std::unique_ptr<GainScheduler> fixed_pi_controller() {
  return std::make_unique<FixedGainScheduler>(fixed_pi_gains(), "pi");
}

Scalar equilibrium_spray(const ScenarioSpec& spec, const Config& cfg) {
  const Scalar r0 = spec.setpoint.at(0.0);
  const Scalar tgt0 = spec.tgt.at(0.0);
  auto steady_y = [&](Scalar u) {
    DisturbanceFrame f = cfg.nominal_frame(tgt0);
    f.dsh_outlet_flow = cfg.op.steam_flow + u;
    return steady_state(u, f, cfg.plant, 0.0).sh_temp;
  };
  Scalar lo = cfg.control.u_min, hi = cfg.control.u_max;
  if (steady_y(lo) < r0) return lo;  // even the closed valve is too cold
  if (steady_y(hi) > r0) return hi;  // full spray cannot reach the setpoint
  for (int i = 0; i < 200; ++i) {
    const Scalar mid = 0.5 * (lo + hi);
    (steady_y(mid) > r0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ScenarioResult run_scenario(const ScenarioSpec& spec, GainScheduler& scheduler,
                            const Config& cfg) {
  spec.validate();
  const Scalar dt = spec.dt;
  const long steps = static_cast<long>(std::llround(spec.duration / dt));

  auto noise_eng = make_engine(spec.seed, "sensor-noise");
  std::normal_distribution<Scalar> noise(0.0, 1.0);
  auto measure = [&](Scalar x1_true) {
    return spec.noise_sigma > 0.0 ? x1_true + spec.noise_sigma * noise(noise_eng) : x1_true;
  };

  // Start the loop at the fault-free equilibrium for the initial schedule values.
  const Scalar u_eq = equilibrium_spray(spec, cfg);
  DisturbanceFrame frame0 = cfg.nominal_frame(spec.tgt.at(0.0));
  frame0.dsh_outlet_flow = cfg.op.steam_flow + u_eq;
  PlantState state = steady_state(u_eq, frame0, cfg.plant, 0.0);

  ControllerState cstate;
  Scalar y_meas = measure(state.sh_temp);
  Scalar prev_u = u_eq;
  Scalar prev_d4 = cfg.op.d4_at(spec.tgt.at(0.0));

  if (cfg.bumpless_start) {
    // Preload the integral so the first actuation holds the equilibrium.
    LoopObservation obs0{0.0, spec.setpoint.at(0.0), y_meas,
                         spec.setpoint.at(0.0) - y_meas, state.dsh_temp,
                         spec.tgt.at(0.0), prev_u};
    const GainVector g0 = scheduler.gains(obs0);
    const Scalar ff = g0.kff * (spec.tgt.at(0.0) - cfg.control.tgt_nominal);
    if (std::abs(g0.ki) > 1e-12)
      cstate.integral = clamp_scalar((u_eq - ff) / g0.ki, -cfg.control.integral_clamp,
                                     cfg.control.integral_clamp);
  }

  ScenarioResult out;
  out.trace.reserve(steps);
  try {
    for (long k = 0; k < steps; ++k) {
      const Scalar t = k * dt;
      const Scalar r = spec.setpoint.at(t);
      const Scalar tgt = spec.tgt.at(t);
      const Scalar e = r - y_meas;

      LoopObservation obs{t, r, y_meas, e, state.dsh_temp, tgt, prev_u};
      const GainVector gains = scheduler.gains(obs);

      const ControlResult ctl =
          compute_control(gains, cfg.error_sign * e, cstate, tgt, dt, cfg.control);
      cstate = ctl.state;

      const Scalar leak = spec.fault.flow_at(t);
      DisturbanceFrame frame = cfg.nominal_frame(tgt);
      const Scalar d4 = frame.dsh_inlet_temp;
      frame.dsh_inlet_rate = (k == 0) ? 0.0 : (d4 - prev_d4) / dt;
      frame.dsh_outlet_flow = cfg.op.steam_flow + ctl.u + leak;
      prev_d4 = d4;

      const PlantState before = state;
      state = plant_step(state, ctl.u, frame, cfg.plant, leak, dt);
      const Scalar y_next = measure(state.sh_temp);

      StepOutcome outcome;
      outcome.t = t;
      outcome.dt = dt;
      outcome.r = r;
      outcome.e = e;
      outcome.y = y_meas;
      outcome.y_next = y_next;
      outcome.x2 = before.dsh_temp;
      outcome.x2_next = state.dsh_temp;
      outcome.tgt = tgt;
      outcome.frame = frame;
      outcome.frame.dsh_outlet_flow = cfg.op.steam_flow + ctl.u;  // leak is unmeasured
      outcome.control = ctl;
      const auto loss = scheduler.post_step(outcome);

      TraceRecord rec;
      rec.t = t;
      rec.r = r;
      rec.y = y_meas;
      rec.e = e;
      rec.u = ctl.u;
      rec.gains = gains;
      rec.fault_flow = leak;
      rec.tgt = tgt;
      rec.x1 = before.sh_temp;
      rec.x2 = before.dsh_temp;
      rec.loss = loss;
      out.trace.push_back(rec);

      y_meas = y_next;
      prev_u = ctl.u;
    }
    out.completed = true;
  } catch (const ModelBlowup& ex) {
    out.completed = false;
    out.error = ex.what();
  }
  return out;
}

ComparisonBundle run_comparison(const ScenarioSpec& spec,
                                const std::vector<GainScheduler*>& controllers,
                                const Config& cfg) {
  ComparisonBundle bundle;
  for (GainScheduler* ctrl : controllers) {
    ComparisonEntry entry;
    entry.controller = ctrl->name();
    entry.result = run_scenario(spec, *ctrl, cfg);
    if (entry.result.completed) {
      entry.kpis = compute_kpis(entry.controller, entry.result.trace,
                                cfg.metrics.settle_band, spec.fault.onset_time,
                                cfg.metrics.eval_start);
    } else {
      bundle.all_completed = false;
    }
    bundle.entries.push_back(std::move(entry));
  }
  return bundle;
}

}  // namespace hrsg
