#include "hrsg/rng.hpp"

namespace hrsg {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view component) {
  return splitmix64(root_seed ^ fnv1a(component));
}

std::mt19937_64 make_engine(std::uint64_t root_seed, std::string_view component) {
  return std::mt19937_64(derive_seed(root_seed, component));
}

void fill_fan_in_uniform(Mat& w, std::mt19937_64& eng, Scalar scale) {
  const Scalar s = scale / std::sqrt(static_cast<Scalar>(w.cols() > 0 ? w.cols() : 1));
  std::uniform_real_distribution<Scalar> dist(-s, s);
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(eng);
}

}  // namespace hrsg
