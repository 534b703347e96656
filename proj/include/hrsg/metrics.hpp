#pragma once

#include <optional>
#include <string>

#include "hrsg/trace.hpp"

namespace hrsg {

/// One row of the controller comparison table.
struct KpiRow {
  std::string controller;
  Scalar iae = 0.0;                 // [degC*s]
  Scalar mo = 0.0;                  // [degC]
  std::optional<Scalar> ts;         // [s] after the disturbance; nullopt = never settled
  Scalar cev = 0.0;                 // [(kg/s)^2]
};

/// Integral of absolute tracking error: left-Riemann sum over records with
/// t >= eval_start, each record weighted by the control interval.
Scalar iae(const Trace& trace, Scalar eval_start = 0.0);

/// Largest excursion of y above r (0 when y never exceeds the setpoint).
Scalar max_overshoot(const Trace& trace);

/// Smallest t* >= disturbance_time such that |e| stays within the band for
/// the rest of the trace, reported relative to the disturbance time.
std::optional<Scalar> settling_time(const Trace& trace, Scalar band, Scalar disturbance_time);

/// Population variance of the applied control over the evaluation window.
Scalar control_effort_variance(const Trace& trace, Scalar eval_start = 0.0);

KpiRow compute_kpis(const std::string& controller, const Trace& trace, Scalar band,
                    Scalar disturbance_time, Scalar eval_start = 0.0);

}  // namespace hrsg
