#pragma once

#include <map>
#include <string>
#include <vector>

#include "hrsg/types.hpp"

namespace hrsg::nn {

struct NamedTensor {
  std::string name;
  Mat value;  // vectors stored as n x 1
};

/// Text snapshot of network parameters: a magic line, key=value metadata,
/// then per tensor a "name rows cols" header followed by row-major values
/// printed with full double precision. Round-trips bit-exactly.
struct Snapshot {
  std::map<std::string, std::string> meta;
  std::vector<NamedTensor> tensors;

  const Mat& require(const std::string& name, Eigen::Index rows, Eigen::Index cols) const;
};

void save_snapshot(const std::string& path, const Snapshot& snap);
Snapshot load_snapshot(const std::string& path);

}  // namespace hrsg::nn
