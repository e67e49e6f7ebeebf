#pragma once

#include <cmath>
#include <random>

#include "lbt/model.hpp"

namespace support {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

inline lbt::LindbladDrive random_drive(std::mt19937_64& rng, double lo = 0.05, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {{u(rng), u(rng)}, {u(rng), u(rng)}};
}

/// Drive with common width delta and antisymmetric bias dmu.
inline lbt::LindbladDrive symmetric_drive(double delta, double dmu) {
  return {{0.5 * (delta + dmu), 0.5 * (delta - dmu)}, {0.5 * (delta - dmu), 0.5 * (delta + dmu)}};
}

inline double bias(const lbt::LindbladDrive& d) {
  return d.left.alpha * d.right.beta - d.left.beta * d.right.alpha;
}

}  // namespace support
