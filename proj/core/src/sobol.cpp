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

#include "goalprobe/sobol.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace goalprobe {

namespace {

struct Primitive {
  unsigned degree;
  std::uint32_t coeffs;  // interior coefficients a
  std::array<std::uint32_t, 5> m;
};

// new-joe-kuo-6.21201, dimensions 2..10.
constexpr std::array<Primitive, SobolSequence::kMaxDim - 1> kJoeKuo = {{
    {1, 0, {1, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0}},
    {4, 4, {1, 3, 5, 13, 0}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
}};

}  // namespace

SobolSequence::SobolSequence(unsigned dim) : dim_(dim), direction_(static_cast<std::size_t>(dim) * kBits) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("sobol dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }
  for (unsigned b = 0; b < kBits; ++b) direction_[b] = 1u << (kBits - 1 - b);
  for (unsigned d = 1; d < dim; ++d) {
    const Primitive& p = kJoeKuo[d - 1];
    std::uint32_t* v = &direction_[static_cast<std::size_t>(d) * kBits];
    for (unsigned b = 0; b < kBits; ++b) {
      if (b < p.degree) {
        v[b] = p.m[b] << (kBits - 1 - b);
        continue;
      }
      std::uint32_t value = v[b - p.degree] ^ (v[b - p.degree] >> p.degree);
      for (unsigned k = 1; k < p.degree; ++k) {
        if ((p.coeffs >> (p.degree - 1 - k)) & 1u) value ^= v[b - k];
      }
      v[b] = value;
    }
  }
}

std::vector<double> SobolSequence::point(std::uint64_t index) const {
  if (index >= (std::uint64_t{1} << kBits)) throw std::out_of_range("sobol index exceeds 2^32");
  const std::uint64_t gray = index ^ (index >> 1);
  std::vector<double> out(dim_);
  for (unsigned d = 0; d < dim_; ++d) {
    std::uint32_t x = 0;
    const std::uint32_t* v = &direction_[static_cast<std::size_t>(d) * kBits];
    for (unsigned b = 0; b < kBits; ++b) {
      if ((gray >> b) & 1u) x ^= v[b];
    }
    out[d] = static_cast<double>(x) / 4294967296.0;
  }
  return out;
}

std::vector<double> sobol_point(std::uint64_t index, unsigned dim) {
  if (index < 1) throw std::invalid_argument("sobol_point index must be >= 1");
  return SobolSequence(dim).point(index);
}

}  // namespace goalprobe
