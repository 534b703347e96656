#include "hrsg/nn/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace hrsg::nn {

AdamState AdamState::make(Eigen::Index n, Scalar lr) {
  AdamState st;
  st.m = Vec::Zero(n);
  st.v = Vec::Zero(n);
  st.lr = lr;
  return st;
}

void adam_step(Vec& params, const Vec& grads, AdamState& st) {
  if (params.size() != grads.size() || params.size() != st.m.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  st.step += 1;
  st.m = st.beta1 * st.m + (1.0 - st.beta1) * grads;
  st.v = st.beta2 * st.v + (1.0 - st.beta2) * grads.cwiseProduct(grads);
  const Scalar c1 = 1.0 - std::pow(st.beta1, static_cast<Scalar>(st.step));
  const Scalar c2 = 1.0 - std::pow(st.beta2, static_cast<Scalar>(st.step));
  params -= st.lr * (st.m / c1).cwiseQuotient(((st.v / c2).cwiseSqrt().array() + st.eps).matrix());
}

void gd_step(Vec& params, const Vec& grads, Scalar eta) {
  if (params.size() != grads.size()) throw std::invalid_argument("gd_step: shape mismatch");
  params -= eta * grads;
}

Scalar clip_grad_norm(Vec& grads, Scalar max_norm) {
  const Scalar n = grads.norm();
  if (n > max_norm && n > 0.0) grads *= max_norm / n;
  return n;
}

}  // namespace hrsg::nn
