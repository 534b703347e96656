#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrsg/types.hpp"

namespace hrsg::nn {

enum class Activation { Tanh, Linear };

/// Contiguous slice of the flattened parameter vector, for reporting.
struct ParamBlock {
  std::string name;
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

struct DenseLayer {
  Mat w;  // out x in
  Vec b;
  Activation act = Activation::Tanh;
};

/// Plain MLP: affine -> tanh chain, final layer linear.
struct DenseNet {
  std::vector<DenseLayer> layers;

  /// dims = {in, h1, ..., out}; hidden layers tanh, output linear.
  static DenseNet make(const std::vector<int>& dims, std::uint64_t root_seed,
                       const std::string& stream, Scalar init_scale = 1.0);

  Eigen::Index param_count() const;
  Vec flatten() const;
  void unflatten(const Vec& theta);
  std::vector<ParamBlock> param_blocks() const;
};

struct DenseTape {
  std::vector<Vec> inputs;   // input seen by each layer
  std::vector<Vec> preacts;  // affine output per layer
};

Vec dense_forward(const DenseNet& net, const Vec& x, DenseTape* tape = nullptr);

struct DenseGrads {
  std::vector<Mat> dw;
  std::vector<Vec> db;
  Vec dinput;

  Vec flatten() const;
};

/// Exact reverse-mode gradients for the scalar loss whose gradient w.r.t.
/// the network output is dout. The tape must come from a dense_forward on
/// the same parameters.
DenseGrads dense_backward(const DenseNet& net, const DenseTape& tape, const Vec& dout);

}  // namespace hrsg::nn
