#pragma once

// Test-only reference implementations, kept deliberately independent of the
// library code paths they check: plain loops, no Eigen expressions, no reuse
// of the production forward/backward routines.

#include <cmath>
#include <functional>
#include <vector>

#include "hrsg/plant.hpp"
#include "hrsg/types.hpp"

namespace oracle {

/// Explicit-Euler integration of the plant at a fine step.
inline hrsg::PlantState euler_plant(const hrsg::PlantState& start, hrsg::Scalar u,
                                    const hrsg::DisturbanceFrame& d,
                                    const hrsg::PlantConstants& c, hrsg::Scalar leak,
                                    hrsg::Scalar t_end, hrsg::Scalar h) {
  hrsg::PlantState x = start;
  const long n = static_cast<long>(std::llround(t_end / h));
  for (long i = 0; i < n; ++i) {
    const hrsg::Scalar w = u + leak;
    const hrsg::Scalar dx1 =
        c.sh_rate * (c.heat_gain * d.fuel_flow +
                     d.dsh_outlet_flow * (x.dsh_temp - x.sh_temp) - d.ambient_rate);
    const hrsg::Scalar dx2 =
        c.dsh_rate * ((d.steam_flow + w) * (d.dsh_inlet_temp - x.dsh_temp) -
                      w * (d.dsh_inlet_temp - d.spray_temp) +
                      d.mean_dsh_inlet_flow * d.dsh_inlet_rate);
    x.sh_temp += h * dx1;
    x.dsh_temp += h * dx2;
  }
  return x;
}

/// Bisection root finder on a monotone function.
inline hrsg::Scalar bisect(const std::function<hrsg::Scalar(hrsg::Scalar)>& f,
                           hrsg::Scalar lo, hrsg::Scalar hi, int iters = 200) {
  hrsg::Scalar flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const hrsg::Scalar mid = 0.5 * (lo + hi);
    const hrsg::Scalar fm = f(mid);
    if ((flo <= 0 && fm <= 0) || (flo > 0 && fm > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Central finite differences of a scalar function of a flat parameter vector.
inline hrsg::Vec finite_difference(const std::function<hrsg::Scalar(const hrsg::Vec&)>& f,
                                   const hrsg::Vec& theta, hrsg::Scalar h = 1e-5) {
  hrsg::Vec g(theta.size());
  hrsg::Vec p = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    const hrsg::Scalar v = theta[i];
    p[i] = v + h;
    const hrsg::Scalar fp = f(p);
    p[i] = v - h;
    const hrsg::Scalar fm = f(p);
    p[i] = v;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Worst relative mismatch between analytic and finite-difference gradients,
/// with an absolute floor under which disagreement is ignored.
inline hrsg::Scalar worst_rel_error(const hrsg::Vec& analytic, const hrsg::Vec& fd,
                                    hrsg::Scalar abs_floor = 1e-8) {
  hrsg::Scalar worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.size(); ++i) {
    const hrsg::Scalar denom = std::max({std::abs(analytic[i]), std::abs(fd[i]), abs_floor});
    worst = std::max(worst, std::abs(analytic[i] - fd[i]) / denom);
  }
  return worst;
}

/// Scalar-by-scalar re-evaluation of an MLP: weights given as nested vectors,
/// tanh on all but the last layer.
inline std::vector<double> scalar_mlp(
    const std::vector<std::vector<std::vector<double>>>& weights,
    const std::vector<std::vector<double>>& biases, const std::vector<double>& input) {
  std::vector<double> h = input;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    std::vector<double> z(biases[l].size(), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) {
      double acc = biases[l][i];
      for (std::size_t j = 0; j < h.size(); ++j) acc += weights[l][i][j] * h[j];
      z[i] = acc;
    }
    if (l + 1 < weights.size())
      for (auto& v : z) v = std::tanh(v);
    h = z;
  }
  return h;
}

/// Composite-Simpson integral of |f| on [a, b].
inline double quad_abs(const std::function<double(double)>& f, double a, double b,
                       int n = 200000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = std::abs(f(a)) + std::abs(f(b));
  for (int i = 1; i < n; ++i) s += std::abs(f(a + i * h)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
