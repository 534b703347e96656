#pragma once

#include <functional>

#include "hrsg/types.hpp"

namespace hrsg {

struct NelderMeadResult {
  Vec x;
  Scalar value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  int max_iterations = 200;
  Scalar tolerance = 1e-10;  // simplex f-spread at which to stop
  Scalar reflection = 1.0;
  Scalar expansion = 2.0;
  Scalar contraction = 0.5;
  Scalar shrink = 0.5;
};

/// Derivative-free simplex minimization from a start point, with the initial
/// simplex spanned by per-dimension steps. The objective is responsible for
/// any domain projection.
NelderMeadResult nelder_mead(const std::function<Scalar(const Vec&)>& f, const Vec& start,
                             const Vec& steps, const NelderMeadOptions& opts = {});

}  // namespace hrsg
