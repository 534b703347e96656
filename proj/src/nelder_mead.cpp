#include "hrsg/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace hrsg {

NelderMeadResult nelder_mead(const std::function<Scalar(const Vec&)>& f, const Vec& start,
                             const Vec& steps, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(start.size());
  std::vector<Vec> x(n + 1, start);
  for (int i = 0; i < n; ++i) x[i + 1][i] += steps[i];
  std::vector<Scalar> fx(n + 1);
  for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<int> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
  };

  NelderMeadResult res;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    sort_simplex();
    const int best = order[0], worst = order[n], second_worst = order[n - 1];
    if (std::abs(fx[worst] - fx[best]) <= opts.tolerance) {
      res.converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += x[i];
    centroid /= n;

    const Vec reflected = centroid + opts.reflection * (centroid - x[worst]);
    const Scalar fr = f(reflected);

    if (fr < fx[best]) {
      const Vec expanded = centroid + opts.expansion * (reflected - centroid);
      const Scalar fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
    } else if (fr < fx[second_worst]) {
      x[worst] = reflected;
      fx[worst] = fr;
    } else {
      const bool outside = fr < fx[worst];
      const Vec toward = outside ? reflected : x[worst];
      const Vec contracted = centroid + opts.contraction * (toward - centroid);
      const Scalar fc = f(contracted);
      if (fc < (outside ? fr : fx[worst])) {
        x[worst] = contracted;
        fx[worst] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          const int idx = order[i];
          x[idx] = x[order[0]] + opts.shrink * (x[idx] - x[order[0]]);
          fx[idx] = f(x[idx]);
        }
      }
    }
  }

  sort_simplex();
  res.x = x[order[0]];
  res.value = fx[order[0]];
  res.iterations = iter;
  return res;
}

}  // namespace hrsg
