#include "hrsg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hrsg/calibrate.hpp"

namespace hrsg {
namespace {

using nlohmann::json;

/// Applies section[key] onto dst if present, tracking consumed keys.
struct SectionReader {
  const json& sec;
  std::set<std::string> seen;
  std::string name;

  SectionReader(const json& j, std::string n) : sec(j), name(std::move(n)) {}

  template <typename T>
  void get(const char* key, T& dst) {
    seen.insert(key);
    if (sec.contains(key)) {
      try {
        dst = sec.at(key).get<T>();
      } catch (const json::exception& ex) {
        throw ConfigError("config key '" + name + "." + key + "': " + ex.what());
      }
    }
  }

  void finish() const {
    for (auto it = sec.begin(); it != sec.end(); ++it)
      if (!seen.count(it.key()))
        throw ConfigError("unknown config key '" + name + "." + it.key() + "'");
  }
};

void read_pair(SectionReader& r, const char* key, Scalar& lo, Scalar& hi) {
  r.seen.insert(key);
  if (r.sec.contains(key)) {
    const auto& arr = r.sec.at(key);
    if (!arr.is_array() || arr.size() != 2)
      throw ConfigError("config key '" + r.name + "." + key + "' must be [lo, hi]");
    lo = arr[0].get<Scalar>();
    hi = arr[1].get<Scalar>();
  }
}

}  // namespace

DisturbanceFrame Config::nominal_frame(Scalar tgt) const {
  DisturbanceFrame f;
  f.fuel_flow = op.fuel_flow;
  f.steam_flow = op.steam_flow;
  f.ambient_rate = 0.0;
  f.dsh_inlet_temp = op.d4_at(tgt);
  f.spray_temp = op.spray_temp;
  f.dsh_inlet_rate = 0.0;
  f.dsh_outlet_flow = op.steam_flow + op.u_nominal;
  f.mean_dsh_inlet_flow = op.steam_flow;
  f.tgt = tgt;
  return f;
}

Config default_config() {
  Config cfg;
  cfg.plant = calibrate_plant(cfg.op, cfg.control, cfg.scenario.tgt_end).constants;
  return cfg;
}

Config config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }

  Config cfg = default_config();
  std::set<std::string> known = {"seed",     "error_sign", "bumpless_start", "plant",
                                 "operating_point", "control", "fixed_gains", "gain_box",
                                 "scaling",  "lstm",       "dataset",        "pinn",
                                 "scenario", "metrics"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config section '" + it.key() + "'");

  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("error_sign")) cfg.error_sign = j.at("error_sign").get<Scalar>();
  if (j.contains("bumpless_start")) cfg.bumpless_start = j.at("bumpless_start").get<bool>();

  bool plant_given = j.contains("plant");
  if (j.contains("operating_point")) {
    SectionReader r(j.at("operating_point"), "operating_point");
    r.get("setpoint", cfg.op.setpoint);
    r.get("u_nominal", cfg.op.u_nominal);
    r.get("tgt_nominal", cfg.op.tgt_nominal);
    r.get("d4_offset", cfg.op.d4_offset);
    r.get("d4_tgt_slope", cfg.op.d4_tgt_slope);
    r.get("fuel_flow", cfg.op.fuel_flow);
    r.get("steam_flow", cfg.op.steam_flow);
    r.get("spray_temp", cfg.op.spray_temp);
    r.get("sh_time_constant", cfg.op.sh_time_constant);
    r.get("dsh_time_constant", cfg.op.dsh_time_constant);
    r.finish();
    // Re-derive the plant constants unless the file pins them explicitly.
    if (!plant_given)
      cfg.plant = calibrate_plant(cfg.op, cfg.control, cfg.scenario.tgt_end).constants;
  }
  if (plant_given) {
    SectionReader r(j.at("plant"), "plant");
    r.get("heat_gain", cfg.plant.heat_gain);
    r.get("sh_rate", cfg.plant.sh_rate);
    r.get("dsh_rate", cfg.plant.dsh_rate);
    r.get("temp_min", cfg.plant.temp_min);
    r.get("temp_max", cfg.plant.temp_max);
    r.finish();
    if (!(cfg.plant.sh_rate > 0.0) || !(cfg.plant.dsh_rate > 0.0))
      throw ConfigError("plant.sh_rate and plant.dsh_rate must be positive");
  }
  if (j.contains("control")) {
    SectionReader r(j.at("control"), "control");
    r.get("u_min", cfg.control.u_min);
    r.get("u_max", cfg.control.u_max);
    r.get("integral_clamp", cfg.control.integral_clamp);
    r.get("tgt_nominal", cfg.control.tgt_nominal);
    r.finish();
  }
  if (j.contains("fixed_gains")) {
    SectionReader r(j.at("fixed_gains"), "fixed_gains");
    r.get("kp", cfg.fixed_gains.kp);
    r.get("ki", cfg.fixed_gains.ki);
    r.get("kff", cfg.fixed_gains.kff);
    r.finish();
  }
  if (j.contains("gain_box")) {
    SectionReader r(j.at("gain_box"), "gain_box");
    read_pair(r, "kp", cfg.gain_box.kp_lo, cfg.gain_box.kp_hi);
    read_pair(r, "ki", cfg.gain_box.ki_lo, cfg.gain_box.ki_hi);
    read_pair(r, "kff", cfg.gain_box.kff_lo, cfg.gain_box.kff_hi);
    r.finish();
  }
  if (j.contains("scaling")) {
    SectionReader r(j.at("scaling"), "scaling");
    r.get("e_scale", cfg.scaling.e_scale);
    r.get("y_center", cfg.scaling.y_center);
    r.get("y_halfspan", cfg.scaling.y_halfspan);
    r.get("tgt_center", cfg.scaling.tgt_center);
    r.get("tgt_halfspan", cfg.scaling.tgt_halfspan);
    r.get("u_center", cfg.scaling.u_center);
    r.get("u_halfspan", cfg.scaling.u_halfspan);
    r.finish();
  }
  if (j.contains("lstm")) {
    SectionReader r(j.at("lstm"), "lstm");
    r.get("window", cfg.lstm.window);
    r.get("hidden1", cfg.lstm.hidden1);
    r.get("hidden2", cfg.lstm.hidden2);
    r.get("dropout", cfg.lstm.dropout);
    r.get("lr", cfg.lstm.lr);
    r.get("batch", cfg.lstm.batch);
    r.get("max_epochs", cfg.lstm.max_epochs);
    r.get("patience", cfg.lstm.patience);
    r.get("finetune_epochs", cfg.lstm.finetune_epochs);
    r.get("finetune_noise_sigma", cfg.lstm.finetune_noise_sigma);
    r.finish();
  }
  if (j.contains("dataset")) {
    SectionReader r(j.at("dataset"), "dataset");
    r.get("hours", cfg.dataset.hours);
    r.get("segment_seconds", cfg.dataset.segment_seconds);
    r.get("window_stride", cfg.dataset.window_stride);
    r.get("nm_max_iters", cfg.dataset.nm_max_iters);
    r.get("nm_tol", cfg.dataset.nm_tol);
    r.get("split_train", cfg.dataset.split_train);
    r.get("split_val", cfg.dataset.split_val);
    r.get("split_test", cfg.dataset.split_test);
    r.finish();
  }
  if (j.contains("pinn")) {
    SectionReader r(j.at("pinn"), "pinn");
    r.get("hidden", cfg.pinn.hidden);
    r.get("mu", cfg.pinn.mu);
    r.get("eta", cfg.pinn.eta);
    r.get("grad_clip", cfg.pinn.grad_clip);
    r.get("init_scale", cfg.pinn.init_scale);
    r.get("rate_smoothing", cfg.pinn.rate_smoothing);
    r.finish();
  }
  if (j.contains("scenario")) {
    SectionReader r(j.at("scenario"), "scenario");
    r.get("duration", cfg.scenario.duration);
    r.get("setpoint", cfg.scenario.setpoint);
    r.get("ramp_start", cfg.scenario.ramp_start);
    r.get("ramp_seconds", cfg.scenario.ramp_seconds);
    r.get("tgt_start", cfg.scenario.tgt_start);
    r.get("tgt_end", cfg.scenario.tgt_end);
    r.get("mw_per_degc", cfg.scenario.mw_per_degc);
    r.get("leak_flow", cfg.scenario.leak_flow);
    r.get("leak_onset", cfg.scenario.leak_onset);
    r.get("leak_max", cfg.scenario.leak_max);
    r.get("noise_sigma", cfg.scenario.noise_sigma);
    r.finish();
  }
  if (j.contains("metrics")) {
    SectionReader r(j.at("metrics"), "metrics");
    r.get("settle_band", cfg.metrics.settle_band);
    r.get("eval_start", cfg.metrics.eval_start);
    r.finish();
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

std::string config_to_json_text(const Config& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["error_sign"] = cfg.error_sign;
  j["bumpless_start"] = cfg.bumpless_start;
  j["plant"] = {{"heat_gain", cfg.plant.heat_gain},
                {"sh_rate", cfg.plant.sh_rate},
                {"dsh_rate", cfg.plant.dsh_rate},
                {"temp_min", cfg.plant.temp_min},
                {"temp_max", cfg.plant.temp_max}};
  j["operating_point"] = {{"setpoint", cfg.op.setpoint},
                          {"u_nominal", cfg.op.u_nominal},
                          {"tgt_nominal", cfg.op.tgt_nominal},
                          {"d4_offset", cfg.op.d4_offset},
                          {"d4_tgt_slope", cfg.op.d4_tgt_slope},
                          {"fuel_flow", cfg.op.fuel_flow},
                          {"steam_flow", cfg.op.steam_flow},
                          {"spray_temp", cfg.op.spray_temp},
                          {"sh_time_constant", cfg.op.sh_time_constant},
                          {"dsh_time_constant", cfg.op.dsh_time_constant}};
  j["control"] = {{"u_min", cfg.control.u_min},
                  {"u_max", cfg.control.u_max},
                  {"integral_clamp", cfg.control.integral_clamp},
                  {"tgt_nominal", cfg.control.tgt_nominal}};
  j["fixed_gains"] = {{"kp", cfg.fixed_gains.kp}, {"ki", cfg.fixed_gains.ki}, {"kff", cfg.fixed_gains.kff}};
  j["gain_box"] = {{"kp", {cfg.gain_box.kp_lo, cfg.gain_box.kp_hi}},
                   {"ki", {cfg.gain_box.ki_lo, cfg.gain_box.ki_hi}},
                   {"kff", {cfg.gain_box.kff_lo, cfg.gain_box.kff_hi}}};
  j["scaling"] = {{"e_scale", cfg.scaling.e_scale},
                  {"y_center", cfg.scaling.y_center},
                  {"y_halfspan", cfg.scaling.y_halfspan},
                  {"tgt_center", cfg.scaling.tgt_center},
                  {"tgt_halfspan", cfg.scaling.tgt_halfspan},
                  {"u_center", cfg.scaling.u_center},
                  {"u_halfspan", cfg.scaling.u_halfspan}};
  j["lstm"] = {{"window", cfg.lstm.window},
               {"hidden1", cfg.lstm.hidden1},
               {"hidden2", cfg.lstm.hidden2},
               {"dropout", cfg.lstm.dropout},
               {"lr", cfg.lstm.lr},
               {"batch", cfg.lstm.batch},
               {"max_epochs", cfg.lstm.max_epochs},
               {"patience", cfg.lstm.patience},
               {"finetune_epochs", cfg.lstm.finetune_epochs},
               {"finetune_noise_sigma", cfg.lstm.finetune_noise_sigma}};
  j["dataset"] = {{"hours", cfg.dataset.hours},
                  {"segment_seconds", cfg.dataset.segment_seconds},
                  {"window_stride", cfg.dataset.window_stride},
                  {"nm_max_iters", cfg.dataset.nm_max_iters},
                  {"nm_tol", cfg.dataset.nm_tol},
                  {"split_train", cfg.dataset.split_train},
                  {"split_val", cfg.dataset.split_val},
                  {"split_test", cfg.dataset.split_test}};
  j["pinn"] = {{"hidden", cfg.pinn.hidden},
               {"mu", cfg.pinn.mu},
               {"eta", cfg.pinn.eta},
               {"grad_clip", cfg.pinn.grad_clip},
               {"init_scale", cfg.pinn.init_scale},
               {"rate_smoothing", cfg.pinn.rate_smoothing}};
  j["scenario"] = {{"duration", cfg.scenario.duration},
                   {"setpoint", cfg.scenario.setpoint},
                   {"ramp_start", cfg.scenario.ramp_start},
                   {"ramp_seconds", cfg.scenario.ramp_seconds},
                   {"tgt_start", cfg.scenario.tgt_start},
                   {"tgt_end", cfg.scenario.tgt_end},
                   {"mw_per_degc", cfg.scenario.mw_per_degc},
                   {"leak_flow", cfg.scenario.leak_flow},
                   {"leak_onset", cfg.scenario.leak_onset},
                   {"leak_max", cfg.scenario.leak_max},
                   {"noise_sigma", cfg.scenario.noise_sigma}};
  j["metrics"] = {{"settle_band", cfg.metrics.settle_band}, {"eval_start", cfg.metrics.eval_start}};
  return j.dump(2) + "\n";
}

}  // namespace hrsg
