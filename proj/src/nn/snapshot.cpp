#include "hrsg/nn/snapshot.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hrsg::nn {
namespace {

constexpr const char* kMagic = "hrsglab-net v1";

std::string fmt_value(Scalar v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const Mat& Snapshot::require(const std::string& name, Eigen::Index rows,
                             Eigen::Index cols) const {
  for (const auto& t : tensors) {
    if (t.name == name) {
      if (t.value.rows() != rows || t.value.cols() != cols)
        throw std::runtime_error("snapshot tensor '" + name + "' has shape " +
                                 std::to_string(t.value.rows()) + "x" +
                                 std::to_string(t.value.cols()) + ", expected " +
                                 std::to_string(rows) + "x" + std::to_string(cols));
      return t.value;
    }
  }
  throw std::runtime_error("snapshot is missing tensor '" + name + "'");
}

void save_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot: " + path);
  out << kMagic << "\n";
  for (const auto& [k, v] : snap.meta) out << "meta " << k << " " << v << "\n";
  out << "tensors " << snap.tensors.size() << "\n";
  for (const auto& t : snap.tensors) {
    out << t.name << " " << t.value.rows() << " " << t.value.cols() << "\n";
    for (Eigen::Index i = 0; i < t.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.value.cols(); ++j) {
        if (j) out << " ";
        out << fmt_value(t.value(i, j));
      }
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failure on snapshot: " + path);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read snapshot: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("not a parameter snapshot: " + path);

  Snapshot snap;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "meta") {
      std::string k, v;
      ls >> k >> v;
      snap.meta[k] = v;
    } else if (tag == "tensors") {
      ls >> count;
      break;
    } else {
      throw std::runtime_error("malformed snapshot header line: " + line);
    }
  }
  for (std::size_t t = 0; t < count; ++t) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols))
      throw std::runtime_error("truncated snapshot tensor header in " + path);
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        if (!(in >> m(i, j)))
          throw std::runtime_error("truncated snapshot values for tensor " + name);
    snap.tensors.push_back({name, std::move(m)});
  }
  return snap;
}

}  // namespace hrsg::nn
