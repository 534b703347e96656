#include "hrsg/nn/lstm.hpp"

#include <stdexcept>

#include "hrsg/rng.hpp"

namespace hrsg::nn {
namespace {

inline Mat sigmoid(const Mat& z) { return ((-z.array()).exp() + 1.0).inverse().matrix(); }

}  // namespace

LstmCell LstmCell::make(int in_dim, int hidden, std::uint64_t root_seed,
                        const std::string& stream, Scalar init_scale) {
  auto eng = make_engine(root_seed, stream);
  LstmCell cell;
  cell.wx.resize(4 * hidden, in_dim);
  cell.wh.resize(4 * hidden, hidden);
  fill_fan_in_uniform(cell.wx, eng, init_scale);
  fill_fan_in_uniform(cell.wh, eng, init_scale);
  cell.b = Vec::Zero(4 * hidden);
  return cell;
}

std::vector<Mat> lstm_forward(const LstmCell& cell, const std::vector<Mat>& xs,
                              LstmTape* tape, const Mat* h0, const Mat* c0) {
  if (xs.empty()) throw std::invalid_argument("lstm_forward: empty sequence");
  const int h = cell.hidden();
  const Eigen::Index batch = xs.front().rows();
  for (const Mat& x : xs)
    if (x.cols() != cell.input_dim() || x.rows() != batch)
      throw std::invalid_argument("lstm_forward: inconsistent sequence shapes");

  Mat hs = h0 ? *h0 : Mat::Zero(batch, h);
  Mat cs = c0 ? *c0 : Mat::Zero(batch, h);
  if (tape) tape->steps.clear();

  std::vector<Mat> out;
  out.reserve(xs.size());
  for (const Mat& x : xs) {
    Mat z = x * cell.wx.transpose() + hs * cell.wh.transpose();
    z.rowwise() += cell.b.transpose();

    LstmStepTape st;
    st.gi = sigmoid(z.leftCols(h));
    st.gf = sigmoid(z.middleCols(h, h));
    st.gg = z.middleCols(2 * h, h).array().tanh().matrix();
    st.go = sigmoid(z.rightCols(h));
    st.c = st.gf.cwiseProduct(cs) + st.gi.cwiseProduct(st.gg);
    st.tanh_c = st.c.array().tanh().matrix();

    Mat h_new = st.go.cwiseProduct(st.tanh_c);
    if (tape) {
      st.x = x;
      st.h_prev = hs;
      st.c_prev = cs;
      tape->steps.push_back(std::move(st));
    }
    cs = tape ? tape->steps.back().c : st.c;
    hs = h_new;
    out.push_back(hs);
  }
  return out;
}

LstmGrads lstm_backward(const LstmCell& cell, const LstmTape& tape,
                        const std::vector<Mat>& dh_seq) {
  if (tape.steps.empty()) throw std::invalid_argument("lstm_backward: empty tape");
  if (dh_seq.size() != tape.steps.size())
    throw std::invalid_argument("lstm_backward: upstream gradient length mismatch");

  const int h = cell.hidden();
  const Eigen::Index batch = tape.steps.front().x.rows();

  LstmGrads g;
  g.dwx = Mat::Zero(cell.wx.rows(), cell.wx.cols());
  g.dwh = Mat::Zero(cell.wh.rows(), cell.wh.cols());
  g.db = Vec::Zero(cell.b.size());
  g.dx.assign(tape.steps.size(), Mat());

  Mat dh_next = Mat::Zero(batch, h);
  Mat dc_next = Mat::Zero(batch, h);

  for (int t = static_cast<int>(tape.steps.size()) - 1; t >= 0; --t) {
    const LstmStepTape& st = tape.steps[t];
    Mat dh = dh_seq[t] + dh_next;

    Mat dgo = dh.cwiseProduct(st.tanh_c);
    Mat dc = dh.cwiseProduct(st.go).cwiseProduct(
                 (1.0 - st.tanh_c.array().square()).matrix()) +
             dc_next;

    Mat dgf = dc.cwiseProduct(st.c_prev);
    Mat dgi = dc.cwiseProduct(st.gg);
    Mat dgg = dc.cwiseProduct(st.gi);
    dc_next = dc.cwiseProduct(st.gf);

    Mat dz(batch, 4 * h);
    dz.leftCols(h) = dgi.cwiseProduct(st.gi.cwiseProduct((1.0 - st.gi.array()).matrix()));
    dz.middleCols(h, h) =
        dgf.cwiseProduct(st.gf.cwiseProduct((1.0 - st.gf.array()).matrix()));
    dz.middleCols(2 * h, h) = dgg.cwiseProduct((1.0 - st.gg.array().square()).matrix());
    dz.rightCols(h) = dgo.cwiseProduct(st.go.cwiseProduct((1.0 - st.go.array()).matrix()));

    g.dwx.noalias() += dz.transpose() * st.x;
    g.dwh.noalias() += dz.transpose() * st.h_prev;
    g.db += dz.colwise().sum().transpose();
    g.dx[t] = dz * cell.wx;
    dh_next = dz * cell.wh;
  }
  return g;
}

}  // namespace hrsg::nn
