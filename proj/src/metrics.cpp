#include "hrsg/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hrsg {
namespace {

Scalar interval_of(const Trace& trace) {
  return trace.size() > 1 ? trace[1].t - trace[0].t : 1.0;
}

}  // namespace

Scalar iae(const Trace& trace, Scalar eval_start) {
  if (trace.empty()) throw std::invalid_argument("iae: empty trace");
  const Scalar dt = interval_of(trace);
  Scalar acc = 0.0;
  for (const TraceRecord& rec : trace)
    if (rec.t >= eval_start) acc += std::abs(rec.e) * dt;
  return acc;
}

Scalar max_overshoot(const Trace& trace) {
  if (trace.empty()) throw std::invalid_argument("max_overshoot: empty trace");
  Scalar mo = 0.0;
  for (const TraceRecord& rec : trace) mo = std::max(mo, rec.y - rec.r);
  return std::max(mo, 0.0);
}

std::optional<Scalar> settling_time(const Trace& trace, Scalar band,
                                    Scalar disturbance_time) {
  if (trace.empty()) throw std::invalid_argument("settling_time: empty trace");
  if (disturbance_time < trace.front().t || disturbance_time > trace.back().t)
    throw std::invalid_argument("settling_time: disturbance time outside the trace");

  // Last record violating the band decides; everything after it is settled.
  std::optional<Scalar> last_violation;
  Scalar next_t = trace.back().t;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (std::abs(it->e) > band) {
      if (it->t == trace.back().t) return std::nullopt;  // ends outside the band
      last_violation = next_t;  // first in-band time after the violation
      break;
    }
    next_t = it->t;
  }
  const Scalar settled_at = last_violation.value_or(trace.front().t);
  return std::max(settled_at, disturbance_time) - disturbance_time;
}

Scalar control_effort_variance(const Trace& trace, Scalar eval_start) {
  std::size_t n = 0;
  Scalar mean = 0.0;
  for (const TraceRecord& rec : trace)
    if (rec.t >= eval_start) {
      mean += rec.u;
      ++n;
    }
  if (n < 2) throw std::invalid_argument("control_effort_variance: needs at least 2 samples");
  mean /= static_cast<Scalar>(n);
  Scalar acc = 0.0;
  for (const TraceRecord& rec : trace)
    if (rec.t >= eval_start) acc += (rec.u - mean) * (rec.u - mean);
  return acc / static_cast<Scalar>(n);
}

KpiRow compute_kpis(const std::string& controller, const Trace& trace, Scalar band,
                    Scalar disturbance_time, Scalar eval_start) {
  KpiRow row;
  row.controller = controller;
  row.iae = iae(trace, eval_start);
  row.mo = max_overshoot(trace);
  row.ts = settling_time(trace, band, disturbance_time);
  row.cev = control_effort_variance(trace, eval_start);
  return row;
}

}  // namespace hrsg
