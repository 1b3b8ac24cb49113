// Copyright 2026 The goalprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOALPROBE_SOBOL_HPP_
#define GOALPROBE_SOBOL_HPP_

#include <cstdint>
#include <vector>

namespace goalprobe {

/// Unscrambled Sobol sequence, Gray-code order, Joe-Kuo direction numbers.
/// Index 0 is the origin; index 1 is (0.5, ..., 0.5).
class SobolSequence {
 public:
  static constexpr unsigned kMaxDim = 10;
  static constexpr unsigned kBits = 32;

  /// Throws std::invalid_argument unless 1 <= dim <= kMaxDim.
  explicit SobolSequence(unsigned dim);

  unsigned dim() const { return dim_; }
  std::vector<double> point(std::uint64_t index) const;

 private:
  unsigned dim_;
  std::vector<std::uint32_t> direction_;  // dim_ * kBits, row-major by dimension
};

/// index-th point of the `dim`-dimensional sequence; index >= 1.
std::vector<double> sobol_point(std::uint64_t index, unsigned dim = 2);

}  // namespace goalprobe

#endif  // GOALPROBE_SOBOL_HPP_
