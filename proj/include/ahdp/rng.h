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

#ifndef AHDP_RNG_H_
#define AHDP_RNG_H_

#include <cstdint>
#include <limits>

namespace ahdp {

// Counter-based generator: the i-th output of stream (seed, stream) is a
// fixed function of (seed, stream, i). Streams derived with Derive() are
// independent of the order in which they are consumed, so trials can be run
// in parallel without changing results.
//
// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed, uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double UniformOpen();
  // Uniform on [0, 1).
  double Uniform();
  // Uniform integer in [0, n). Precondition: n > 0.
  uint64_t UniformInt(uint64_t n);
  // Standard normal draw (Box-Muller on two open uniforms).
  double StandardNormal();

  // Child stream keyed by `index`; does not advance this generator.
  Rng Derive(uint64_t index) const;

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
  uint64_t key_;
  uint64_t counter_ = 0;
};

// SplitMix64 finalizer; exposed for seed derivation in callers.
uint64_t MixBits(uint64_t x);

}  // namespace ahdp

#endif  // AHDP_RNG_H_
