// Copyright 2026 The AHDP Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ahdp/rng.h"

#include <cmath>
#include <numbers>

namespace ahdp {
namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr uint64_t kStreamSalt = 0xd1b54a32d192ed03ULL;

}  // namespace

uint64_t MixBits(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

Rng::Rng(uint64_t seed, uint64_t stream)
    : seed_(seed),
      stream_(stream),
      key_(MixBits(seed + kGolden) ^ MixBits(stream * kStreamSalt + kGolden)) {}

Rng::result_type Rng::operator()() {
  ++counter_;
  return MixBits(key_ + counter_ * kGolden);
}

double Rng::UniformOpen() {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
  const uint64_t k = (*this)() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double Rng::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

uint64_t Rng::UniformInt(uint64_t n) {
  // Rejection sampling removes modulo bias.
  const uint64_t limit = max() - max() % n;
  uint64_t draw;
  do {
    draw = (*this)();
  } while (draw >= limit);
  return draw % n;
}

double Rng::StandardNormal() {
  const double u1 = UniformOpen();
  const double u2 = UniformOpen();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::Derive(uint64_t index) const {
  return Rng(seed_, MixBits(stream_ ^ MixBits(index + kGolden)));
}

}  // namespace ahdp
