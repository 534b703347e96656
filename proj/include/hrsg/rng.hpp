#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "hrsg/types.hpp"

namespace hrsg {

/// All randomness in the project flows from one root seed. Component streams
/// are derived as splitmix64(root ^ fnv1a(component_name)), so adding a new
/// consumer never shifts the draws of an existing one.
std::uint64_t derive_seed(std::uint64_t root_seed, std::string_view component);

/// Deterministic engine for a named component stream.
std::mt19937_64 make_engine(std::uint64_t root_seed, std::string_view component);

/// Fills a matrix with scaled-uniform fan-in values: U(-s, s), s = scale/sqrt(fan_in).
void fill_fan_in_uniform(Mat& w, std::mt19937_64& eng, Scalar scale = 1.0);

}  // namespace hrsg
