#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "hrsg/nn/dense.hpp"
#include "hrsg/nn/lstm.hpp"
#include "hrsg/nn/optim.hpp"
#include "hrsg/nn/snapshot.hpp"
#include "oracles.hpp"

using namespace hrsg;
using namespace hrsg::nn;

TEST_CASE("all-zero dense network maps anything to zero") {
  DenseNet net = DenseNet::make({3, 8, 4, 2}, 1, "t");
  net.unflatten(Vec::Zero(net.param_count()));
  Vec x(3);
  x << 0.4, -2.0, 11.0;
  CHECK(dense_forward(net, x).isZero(0.0));
}

TEST_CASE("single linear layer is plain affine arithmetic") {
  DenseNet net;
  DenseLayer l;
  l.w = Mat::Constant(1, 1, 2.0);
  l.b = Vec::Constant(1, 1.0);
  l.act = Activation::Linear;
  net.layers.push_back(l);
  Vec x(1);
  x << 3.0;
  CHECK(dense_forward(net, x)[0] == 7.0);
}

TEST_CASE("fixed-seed forward matches a scalar-by-scalar re-evaluation") {
  DenseNet net = DenseNet::make({3, 5, 4, 2}, 99, "scalar-check");
  Vec x(3);
  x << 0.1, -0.2, 0.3;
  const Vec got = dense_forward(net, x);

  std::vector<std::vector<std::vector<double>>> ws;
  std::vector<std::vector<double>> bs;
  for (const auto& l : net.layers) {
    std::vector<std::vector<double>> w(l.w.rows(), std::vector<double>(l.w.cols()));
    for (Eigen::Index i = 0; i < l.w.rows(); ++i)
      for (Eigen::Index j = 0; j < l.w.cols(); ++j) w[i][j] = l.w(i, j);
    ws.push_back(w);
    bs.emplace_back(l.b.data(), l.b.data() + l.b.size());
  }
  const auto ref = oracle::scalar_mlp(ws, bs, {0.1, -0.2, 0.3});
  REQUIRE(ref.size() == static_cast<std::size_t>(got.size()));
  for (std::size_t i = 0; i < ref.size(); ++i)
    CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-14));
}

TEST_CASE("dense backward: trivial cases") {
  DenseNet net = DenseNet::make({2, 4, 1}, 5, "bw");
  Vec x(2);
  x << 0.3, -0.8;
  DenseTape tape;
  dense_forward(net, x, &tape);

  SUBCASE("zero upstream gradient zeroes everything") {
    const DenseGrads g = dense_backward(net, tape, Vec::Zero(1));
    CHECK(g.flatten().isZero(0.0));
    CHECK(g.dinput.isZero(0.0));
  }
  SUBCASE("tanh'(0) = 1 for a scalar net") {
    DenseNet one;
    DenseLayer l;
    l.w = Mat::Zero(1, 1);  // w = 0 so preact = 0
    l.b = Vec::Zero(1);
    l.act = Activation::Tanh;
    one.layers.push_back(l);
    Vec xin(1);
    xin << 1.0;
    DenseTape t2;
    dense_forward(one, xin, &t2);
    const DenseGrads g = dense_backward(one, t2, Vec::Ones(1));
    CHECK(g.dw[0](0, 0) == 1.0);  // df/dw = x * tanh'(0) = 1
  }
}

TEST_CASE("dense gradients match central finite differences") {
  DenseNet net = DenseNet::make({3, 6, 5, 2}, 17, "fd");
  Vec x(3);
  x << 0.25, -0.6, 0.9;

  auto loss = [&](const Vec& theta) {
    DenseNet n = net;
    n.unflatten(theta);
    const Vec out = dense_forward(n, x);
    return 0.5 * out.squaredNorm();
  };

  DenseTape tape;
  const Vec out = dense_forward(net, x, &tape);
  const Vec analytic = dense_backward(net, tape, out).flatten();
  const Vec fd = oracle::finite_difference(loss, net.flatten());
  CHECK(oracle::worst_rel_error(analytic, fd) < 1e-6);
}

TEST_CASE("tanh layers bound activations") {
  // Mathematically (-1,1); in doubles tanh rounds to exactly +-1 when deeply
  // saturated, so the hard bound is <= and strictness is checked at moderate
  // preactivations.
  DenseNet net = DenseNet::make({4, 16, 16, 3}, 23, "bounds", 8.0);
  std::mt19937_64 eng(2);
  std::uniform_real_distribution<Scalar> wide(-50.0, 50.0), mild(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Vec x(4);
    for (int j = 0; j < 4; ++j) x[j] = wide(eng);
    DenseTape tape;
    dense_forward(net, x, &tape);
    for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
      const Vec h = tape.inputs[l + 1];
      CHECK(h.maxCoeff() <= 1.0);
      CHECK(h.minCoeff() >= -1.0);
    }
  }
  DenseNet small = DenseNet::make({4, 16, 3}, 29, "bounds-mild", 1.0);
  for (int i = 0; i < 200; ++i) {
    Vec x(4);
    for (int j = 0; j < 4; ++j) x[j] = mild(eng);
    DenseTape tape;
    dense_forward(small, x, &tape);
    const Vec h = tape.inputs[1];
    CHECK(h.maxCoeff() < 1.0);
    CHECK(h.minCoeff() > -1.0);
  }
}

TEST_CASE("all-zero LSTM maps any sequence to zero hidden state") {
  LstmCell cell = LstmCell::make(3, 4, 1, "z");
  cell.wx.setZero();
  cell.wh.setZero();
  cell.b.setZero();
  std::vector<Mat> xs(5, Mat::Random(2, 3));
  const auto hs = lstm_forward(cell, xs);
  CHECK(hs.back().isZero(0.0));
}

TEST_CASE("forced gates: forget=1, input=0 preserves the cell state") {
  const int h = 3;
  LstmCell cell = LstmCell::make(2, h, 1, "gates");
  cell.wx.setZero();
  cell.wh.setZero();
  cell.b.setZero();
  cell.b.segment(h, h).setConstant(500.0);   // forget gate saturates to 1
  cell.b.segment(0, h).setConstant(-500.0);  // input gate saturates to 0

  Mat c0 = Mat::Random(4, h);
  Mat h0 = Mat::Zero(4, h);
  LstmTape tape;
  std::vector<Mat> xs(6, Mat::Random(4, 2));
  lstm_forward(cell, xs, &tape, &h0, &c0);
  CHECK((tape.steps.back().c - c0).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fixed-seed LSTM matches a step-by-step hand recurrence") {
  LstmCell cell = LstmCell::make(2, 2, 77, "hand");
  std::vector<Mat> xs;
  Mat x1(1, 2), x2(1, 2), x3(1, 2);
  x1 << 0.5, -0.25;
  x2 << -0.1, 0.7;
  x3 << 0.3, 0.2;
  xs = {x1, x2, x3};
  const auto hs = lstm_forward(cell, xs);

  // hand recurrence with scalar loops
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  const int h = 2;
  std::vector<double> hv(h, 0.0), cv(h, 0.0);
  for (const Mat& x : xs) {
    std::vector<double> z(4 * h, 0.0);
    for (int r = 0; r < 4 * h; ++r) {
      double acc = cell.b[r];
      for (int j = 0; j < 2; ++j) acc += cell.wx(r, j) * x(0, j);
      for (int j = 0; j < h; ++j) acc += cell.wh(r, j) * hv[j];
      z[r] = acc;
    }
    for (int k = 0; k < h; ++k) {
      const double gi = sig(z[k]), gf = sig(z[h + k]), gg = std::tanh(z[2 * h + k]),
                   go = sig(z[3 * h + k]);
      cv[k] = gf * cv[k] + gi * gg;
      hv[k] = go * std::tanh(cv[k]);
    }
  }
  for (int k = 0; k < h; ++k)
    CHECK(hs.back()(0, k) == doctest::Approx(hv[k]).epsilon(1e-14));
}

TEST_CASE("LSTM backward: trivial and base cases") {
  LstmCell cell = LstmCell::make(3, 4, 31, "bptt0");
  std::vector<Mat> xs(4, Mat::Random(2, 3));
  LstmTape tape;
  const auto hs = lstm_forward(cell, xs, &tape);

  SUBCASE("zero loss gradient gives zero parameter gradients") {
    std::vector<Mat> dh(xs.size(), Mat::Zero(2, 4));
    const LstmGrads g = lstm_backward(cell, tape, dh);
    CHECK(g.dwx.isZero(0.0));
    CHECK(g.dwh.isZero(0.0));
    CHECK(g.db.isZero(0.0));
  }
  SUBCASE("a 1-step window reduces to the single-cell backward") {
    std::vector<Mat> one = {xs[0]};
    LstmTape t1;
    lstm_forward(cell, one, &t1);
    std::vector<Mat> dh1 = {Mat::Ones(2, 4)};
    const LstmGrads a = lstm_backward(cell, t1, dh1);

    // same thing computed through the general path with a length-1 tape
    LstmTape t2;
    lstm_forward(cell, {xs[0]}, &t2);
    const LstmGrads b = lstm_backward(cell, t2, {Mat::Ones(2, 4)});
    CHECK((a.dwx - b.dwx).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.db - b.db).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("BPTT gradients match finite differences on a 2-step window") {
  LstmCell cell = LstmCell::make(2, 3, 13, "bptt-fd");
  Mat x1(1, 2), x2(1, 2);
  x1 << 0.4, -0.3;
  x2 << 0.1, 0.8;
  const std::vector<Mat> xs = {x1, x2};

  auto pack = [&](const LstmCell& c) {
    Vec t(c.param_count());
    t << Eigen::Map<const Vec>(c.wx.data(), c.wx.size()),
        Eigen::Map<const Vec>(c.wh.data(), c.wh.size()), c.b;
    return t;
  };
  auto unpack = [&](const Vec& t) {
    LstmCell c = cell;
    Eigen::Index p = 0;
    Eigen::Map<Vec>(c.wx.data(), c.wx.size()) = t.segment(p, c.wx.size());
    p += c.wx.size();
    Eigen::Map<Vec>(c.wh.data(), c.wh.size()) = t.segment(p, c.wh.size());
    p += c.wh.size();
    c.b = t.segment(p, c.b.size());
    return c;
  };
  auto loss = [&](const Vec& t) {
    const LstmCell c = unpack(t);
    const auto hs = lstm_forward(c, xs);
    return 0.5 * hs.back().squaredNorm();
  };

  LstmTape tape;
  const auto hs = lstm_forward(cell, xs, &tape);
  std::vector<Mat> dh(xs.size(), Mat::Zero(1, 3));
  dh.back() = hs.back();
  const LstmGrads g = lstm_backward(cell, tape, dh);
  Vec analytic(cell.param_count());
  analytic << Eigen::Map<const Vec>(g.dwx.data(), g.dwx.size()),
      Eigen::Map<const Vec>(g.dwh.data(), g.dwh.size()), g.db;

  const Vec fd = oracle::finite_difference(loss, pack(cell));
  CHECK(oracle::worst_rel_error(analytic, fd) < 1e-6);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Vec p = Vec::Constant(4, 1.5);
  AdamState st = AdamState::make(4, 0.001);
  adam_step(p, Vec::Zero(4), st);
  CHECK(p == Vec::Constant(4, 1.5));
  CHECK(st.step == 1);
}

TEST_CASE("adam: first-step magnitude is the learning rate") {
  Vec p = Vec::Zero(1);
  AdamState st = AdamState::make(1, 0.001);
  adam_step(p, Vec::Ones(1), st);
  CHECK(p[0] == doctest::Approx(-0.001).epsilon(1e-6));
}

TEST_CASE("adam is deterministic") {
  Vec p1 = Vec::Constant(3, 0.7), p2 = Vec::Constant(3, 0.7);
  AdamState s1 = AdamState::make(3, 0.01), s2 = AdamState::make(3, 0.01);
  Vec g(3);
  g << 1.0, -2.0, 0.5;
  for (int i = 0; i < 10; ++i) {
    adam_step(p1, g, s1);
    adam_step(p2, g, s2);
  }
  CHECK(p1 == p2);
}

TEST_CASE("plain gradient descent is the literal update rule") {
  Vec p = Vec::Constant(1, 1.0);
  Vec g = Vec::Constant(1, 2.0);
  gd_step(p, g, 0.1);
  CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-15));
  gd_step(p, Vec::Zero(1), 0.1);
  CHECK(p[0] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("adam and plain GD share direction but not magnitude") {
  Vec pa = Vec::Constant(1, 1.0), pg = Vec::Constant(1, 1.0);
  AdamState st = AdamState::make(1, 0.001);
  Vec g = Vec::Constant(1, 2.0);
  adam_step(pa, g, st);
  gd_step(pg, g, 0.001);
  const Scalar da = pa[0] - 1.0, dg = pg[0] - 1.0;
  CHECK(da < 0.0);
  CHECK(dg < 0.0);
  CHECK(da != dg);
}

TEST_CASE("snapshot round-trips bit-exactly") {
  Snapshot snap;
  snap.meta["window"] = "30";
  Mat m = Mat::Random(4, 3);
  m(0, 0) = 1.0 / 3.0;
  m(1, 2) = -1e-17;
  snap.tensors.push_back({"layer.w", m});
  snap.tensors.push_back({"layer.b", Mat::Random(4, 1)});

  const std::string path = "snapshot_roundtrip_test.txt";
  save_snapshot(path, snap);
  const Snapshot back = load_snapshot(path);
  CHECK(back.meta.at("window") == "30");
  CHECK(back.require("layer.w", 4, 3) == m);
  CHECK(back.require("layer.b", 4, 1) == snap.tensors[1].value);
  CHECK_THROWS(back.require("layer.w", 3, 4));
  CHECK_THROWS(back.require("missing", 1, 1));
  std::remove(path.c_str());
}
