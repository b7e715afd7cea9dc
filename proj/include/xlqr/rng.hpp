/*
 Copyright 2026 The xlqr authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

 https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef XLQR_RNG_HPP
#define XLQR_RNG_HPP

#include <cstdint>
#include <random>

#include "xlqr/lin_core.hpp"

namespace xlqr {

/// Replayable Gaussian source. Uniforms come from std::mt19937_64 and the
/// normal transform is the Marsaglia polar method, so streams are
/// bit-identical across platforms for a given seed (std::normal_distribution
/// is implementation-defined and deliberately avoided).
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    // 53-bit mantissa uniform in [0, 1)
    return (gen_() >> 11) * 0x1.0p-53;
  }

  double standard_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  Vector normal_vector(int n, double stddev = 1.0) {
    Vector out(n);
    for (int i = 0; i < n; ++i) out(i) = stddev * standard_normal();
    return out;
  }

  Matrix normal_matrix(int rows, int cols, double stddev = 1.0) {
    Matrix out(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) out(i, j) = stddev * standard_normal();
    return out;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 scramble, used to derive independent per-trial seeds from a
/// base seed without stream overlap.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace xlqr

#endif  // XLQR_RNG_HPP
