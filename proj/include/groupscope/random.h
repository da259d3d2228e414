// Copyright 2026 The groupscope Authors
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


#ifndef GROUPSCOPE_RANDOM_H_
#define GROUPSCOPE_RANDOM_H_

#include <cstdint>
#include <random>

namespace groupscope {

std::uint64_t SplitMix64(std::uint64_t x);

// Seeded generator whose derived draws are identical on every platform:
// std::mt19937_64 output is fixed by the standard, but the standard
// distributions are not, so conversions are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace groupscope

#endif  // GROUPSCOPE_RANDOM_H_
