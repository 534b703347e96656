#pragma once

#include "hrsg/types.hpp"

namespace hrsg::nn {

/// Adam with bias correction over a flat parameter vector.
struct AdamState {
  Vec m, v;
  long step = 0;
  Scalar lr = 1e-3;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar eps = 1e-8;

  static AdamState make(Eigen::Index n, Scalar lr = 1e-3);
};

void adam_step(Vec& params, const Vec& grads, AdamState& st);

/// Plain gradient descent: theta <- theta - eta * grad.
void gd_step(Vec& params, const Vec& grads, Scalar eta);

/// Scales grads in place so its l2 norm is at most max_norm; returns the
/// pre-clip norm.
Scalar clip_grad_norm(Vec& grads, Scalar max_norm);

}  // namespace hrsg::nn
