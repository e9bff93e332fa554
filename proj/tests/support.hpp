#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mecbf/core.hpp"

namespace mecbf::test {

inline RngStream rng_for(std::uint64_t id) {
  return RngStream(77, id).derive(static_cast<std::uint64_t>(StreamPurpose::kTest));
}

inline CMatrix random_matrix(RngStream& rng, int r, int c, double var = 1.0) {
  CMatrix x(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) x(i, j) = rng.complex_normal(var);
  return x;
}

inline RMatrix random_phases(RngStream& rng, int r, int c) {
  RMatrix x(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) x(i, j) = rng.uniform(0.0, 2.0 * kPi);
  return x;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace mecbf::test
