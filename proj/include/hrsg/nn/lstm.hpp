#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrsg/nn/dense.hpp"
#include "hrsg/types.hpp"

namespace hrsg::nn {

/// Single LSTM layer with the usual sigmoid input/forget/output gates and
/// tanh candidate. Gate rows are stacked [input; forget; candidate; output].
/// All sequence tensors are batch-major: one (batch x dim) matrix per step.
struct LstmCell {
  Mat wx;  // 4h x in
  Mat wh;  // 4h x h
  Vec b;   // 4h

  static LstmCell make(int in_dim, int hidden, std::uint64_t root_seed,
                       const std::string& stream, Scalar init_scale = 1.0);

  int hidden() const { return static_cast<int>(b.size()) / 4; }
  int input_dim() const { return static_cast<int>(wx.cols()); }

  Eigen::Index param_count() const { return wx.size() + wh.size() + b.size(); }
};

struct LstmStepTape {
  Mat x, h_prev, c_prev;
  Mat gi, gf, gg, go;  // post-activation gate values
  Mat c, tanh_c;
};

struct LstmTape {
  std::vector<LstmStepTape> steps;
};

/// Runs the recurrence left-to-right over the sequence; returns the hidden
/// state at every step. Initial hidden/cell states default to zero.
std::vector<Mat> lstm_forward(const LstmCell& cell, const std::vector<Mat>& xs,
                              LstmTape* tape = nullptr, const Mat* h0 = nullptr,
                              const Mat* c0 = nullptr);

struct LstmGrads {
  Mat dwx, dwh;
  Vec db;
  std::vector<Mat> dx;  // gradient on each input step
};

/// Backpropagation through time over the taped window. dh_seq carries the
/// upstream gradient on each step's hidden output (zero matrices where a
/// step's output is unused).
LstmGrads lstm_backward(const LstmCell& cell, const LstmTape& tape,
                        const std::vector<Mat>& dh_seq);

}  // namespace hrsg::nn
