#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hrsg/control.hpp"
#include "hrsg/plant.hpp"
#include "hrsg/types.hpp"

namespace hrsg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-channel affine scalings bringing loop signals into roughly [-1, 1]
/// for the network inputs. Shared by both tuners.
struct SignalScaling {
  Scalar e_scale = 15.0;
  Scalar y_center = 520.0, y_halfspan = 40.0;
  Scalar tgt_center = 555.0, tgt_halfspan = 25.0;
  Scalar u_center = 1.0, u_halfspan = 1.0;

  Scalar norm_e(Scalar e) const { return e / e_scale; }
  Scalar norm_y(Scalar y) const { return (y - y_center) / y_halfspan; }
  Scalar norm_tgt(Scalar t) const { return (t - tgt_center) / tgt_halfspan; }
  Scalar norm_u(Scalar u) const { return (u - u_center) / u_halfspan; }
};

/// How the nominal operating point ties the exogenous signals together.
struct OperatingPoint {
  Scalar setpoint = 515.0;       // nominal r [degC]
  Scalar u_nominal = 0.8;        // spray at the calibration equilibrium [kg/s]
  Scalar tgt_nominal = 530.0;    // [degC]
  Scalar d4_offset = 10.0;       // d4 = tgt_nominal - d4_offset at nominal
  Scalar d4_tgt_slope = 0.13;    // degC of d4 per degC of tgt deviation
  Scalar fuel_flow = 1.0;        // constant d1 [kg/s]
  Scalar steam_flow = 65.0;      // nominal d2 [kg/s]
  Scalar spray_temp = 150.0;     // d5 [degC]
  Scalar sh_time_constant = 100.0;   // [s], fixes K2
  Scalar dsh_time_constant = 30.0;   // [s], fixes K3

  Scalar d4_at(Scalar tgt) const {
    return (tgt_nominal - d4_offset) + d4_tgt_slope * (tgt - tgt_nominal);
  }
};

struct LstmTrainConfig {
  int window = 30;
  int hidden1 = 50;
  int hidden2 = 25;
  Scalar dropout = 0.2;
  Scalar lr = 1e-3;
  int batch = 32;
  int max_epochs = 40;
  int patience = 8;
  int finetune_epochs = 10;
  Scalar finetune_noise_sigma = 0.3;  // measurement noise for the surrogate fine-tune set
};

struct DatasetConfig {
  Scalar hours = 120.0;          // total fault-free operating data to synthesize
  Scalar segment_seconds = 300.0;
  int window_stride = 30;        // spacing between training windows in a segment
  int nm_max_iters = 200;
  Scalar nm_tol = 1e-10;
  Scalar split_train = 0.70, split_val = 0.15, split_test = 0.15;
};

struct PinnConfig {
  std::vector<int> hidden = {256, 128, 64, 32};
  Scalar mu = 450.0;         // physics-loss weight (see calibrate --help for the sweep)
  Scalar eta = 1e-3;         // online gradient-descent rate
  Scalar grad_clip = 10.0;   // l2 clip applied to the online update
  Scalar init_scale = 0.05;  // hidden-weight scale at warm start
  int rate_smoothing = 1;    // moving-average width for measured rates (1 = off)
};

struct ScenarioConfig {
  Scalar duration = 3600.0;
  Scalar setpoint = 515.0;
  Scalar ramp_start = 600.0;
  Scalar ramp_seconds = 300.0;   // 30 MW at 6 MW/min
  Scalar tgt_start = 530.0;
  Scalar tgt_end = 560.0;
  Scalar mw_per_degc = 1.0;      // informational load mapping
  Scalar leak_flow = 0.5;
  Scalar leak_onset = 1000.0;
  Scalar leak_max = 1.0;
  Scalar noise_sigma = 0.0;      // KPI runs are noise free
};

struct MetricsConfig {
  Scalar settle_band = 1.0;      // [degC]
  Scalar eval_start = 0.0;       // IAE/CEV window start [s]; end = trace end
};

struct Config {
  PlantConstants plant;          // derived from the operating point by calibrate
  OperatingPoint op;
  ControlConfig control;
  GainVector fixed_gains{1.2, 105.0, 0.0};
  Scalar error_sign = -1.0;      // wiring from e = r - y to the law's input
  bool bumpless_start = true;    // preload integral so u(0) holds the initial equilibrium
  GainBox gain_box;
  SignalScaling scaling;
  LstmTrainConfig lstm;
  DatasetConfig dataset;
  PinnConfig pinn;
  ScenarioConfig scenario;
  MetricsConfig metrics;
  std::uint64_t seed = 42;

  /// Nominal disturbance frame at a given exhaust temperature, before the
  /// per-step quantities (d6, d7) are filled in by the loop.
  DisturbanceFrame nominal_frame(Scalar tgt) const;
};

Config default_config();

/// Loads a JSON config file on top of the defaults; unknown keys are an error.
Config load_config(const std::string& path);
Config config_from_json_text(const std::string& text);
std::string config_to_json_text(const Config& cfg);

}  // namespace hrsg
