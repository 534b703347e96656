#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hrsg/types.hpp"

namespace hrsg {

/// Composite online-training loss for one control step.
/// total == data_loss + mu * physics_loss holds exactly.
struct PinnLossBreakdown {
  Scalar data_loss = 0.0;     // (degC)^2 scale
  Scalar physics_loss = 0.0;  // squared rate-residual scale
  Scalar mu = 0.0;
  Scalar total = 0.0;
};

/// One control interval of a closed-loop run; the unit of persistence and
/// of all metric computation.
struct TraceRecord {
  Scalar t = 0.0;
  Scalar r = 0.0;
  Scalar y = 0.0;   // measured output fed to the controller
  Scalar e = 0.0;   // r - y
  Scalar u = 0.0;   // applied spray flow
  GainVector gains;
  Scalar fault_flow = 0.0;
  Scalar tgt = 0.0;
  Scalar x1 = 0.0;  // true states
  Scalar x2 = 0.0;
  std::optional<PinnLossBreakdown> loss;
};

using Trace = std::vector<TraceRecord>;

inline constexpr const char* kTraceCsvHeader =
    "t,r,y,e,u,kp,ki,kff,f,t_gt,x1,x2,l_data,l_phys";

void write_trace_csv(const std::string& path, const Trace& trace);
Trace read_trace_csv(const std::string& path);

}  // namespace hrsg
