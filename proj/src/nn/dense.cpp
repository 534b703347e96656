#include "hrsg/nn/dense.hpp"

#include <stdexcept>

#include "hrsg/rng.hpp"

namespace hrsg::nn {

DenseNet DenseNet::make(const std::vector<int>& dims, std::uint64_t root_seed,
                        const std::string& stream, Scalar init_scale) {
  if (dims.size() < 2) throw std::invalid_argument("DenseNet needs at least one layer");
  auto eng = make_engine(root_seed, stream);
  DenseNet net;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer layer;
    layer.w.resize(dims[i + 1], dims[i]);
    fill_fan_in_uniform(layer.w, eng, init_scale);
    layer.b = Vec::Zero(dims[i + 1]);
    layer.act = (i + 2 == dims.size()) ? Activation::Linear : Activation::Tanh;
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Eigen::Index DenseNet::param_count() const {
  Eigen::Index n = 0;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

Vec DenseNet::flatten() const {
  Vec theta(param_count());
  Eigen::Index pos = 0;
  for (const auto& l : layers) {
    theta.segment(pos, l.w.size()) = Eigen::Map<const Vec>(l.w.data(), l.w.size());
    pos += l.w.size();
    theta.segment(pos, l.b.size()) = l.b;
    pos += l.b.size();
  }
  return theta;
}

void DenseNet::unflatten(const Vec& theta) {
  if (theta.size() != param_count())
    throw std::invalid_argument("DenseNet::unflatten: size mismatch");
  Eigen::Index pos = 0;
  for (auto& l : layers) {
    Eigen::Map<Vec>(l.w.data(), l.w.size()) = theta.segment(pos, l.w.size());
    pos += l.w.size();
    l.b = theta.segment(pos, l.b.size());
    pos += l.b.size();
  }
}

std::vector<ParamBlock> DenseNet::param_blocks() const {
  std::vector<ParamBlock> blocks;
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    blocks.push_back({"dense" + std::to_string(i) + ".w", pos, l.w.size()});
    pos += l.w.size();
    blocks.push_back({"dense" + std::to_string(i) + ".b", pos, l.b.size()});
    pos += l.b.size();
  }
  return blocks;
}

Vec dense_forward(const DenseNet& net, const Vec& x, DenseTape* tape) {
  if (net.layers.empty()) throw std::invalid_argument("empty network");
  if (x.size() != net.layers.front().w.cols())
    throw std::invalid_argument("dense_forward: input dimension mismatch");
  if (tape) {
    tape->inputs.clear();
    tape->preacts.clear();
  }
  Vec h = x;
  for (const auto& l : net.layers) {
    if (tape) tape->inputs.push_back(h);
    Vec z = l.w * h + l.b;
    if (tape) tape->preacts.push_back(z);
    h = (l.act == Activation::Tanh) ? Vec(z.array().tanh()) : z;
  }
  return h;
}

DenseGrads dense_backward(const DenseNet& net, const DenseTape& tape, const Vec& dout) {
  if (tape.inputs.size() != net.layers.size())
    throw std::invalid_argument("dense_backward: tape does not match network");

  DenseGrads g;
  g.dw.resize(net.layers.size());
  g.db.resize(net.layers.size());

  Vec delta = dout;
  for (int i = static_cast<int>(net.layers.size()) - 1; i >= 0; --i) {
    const auto& l = net.layers[i];
    if (l.act == Activation::Tanh) {
      const Vec t = tape.preacts[i].array().tanh();
      delta = delta.cwiseProduct(Vec(1.0 - t.array().square()));
    }
    g.dw[i] = delta * tape.inputs[i].transpose();
    g.db[i] = delta;
    delta = l.w.transpose() * delta;
  }
  g.dinput = delta;
  return g;
}

Vec DenseGrads::flatten() const {
  Eigen::Index n = 0;
  for (std::size_t i = 0; i < dw.size(); ++i) n += dw[i].size() + db[i].size();
  Vec out(n);
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    out.segment(pos, dw[i].size()) = Eigen::Map<const Vec>(dw[i].data(), dw[i].size());
    pos += dw[i].size();
    out.segment(pos, db[i].size()) = db[i];
    pos += db[i].size();
  }
  return out;
}

}  // namespace hrsg::nn
