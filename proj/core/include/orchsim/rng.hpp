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

#pragma once

#include <cstdint>
#include <string>

namespace orchsim {

/// Deterministic 64-bit stream (splitmix64). Every simulation component draws
/// from its own child stream derived from (run seed, stream name), so adding
/// draws in one component never perturbs another.
class Rng {
 public:
  Rng() : state_(0x9e3779b97f4a7c15ull) {}
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Child stream for a named component of a seeded run.
  static Rng child(std::uint64_t root_seed, const std::string& stream_name);

  std::uint64_t next_u64();

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1).
  double u01();

  /// Uniform double in [lo, hi).
  double uniform_real(double lo, double hi);

 private:
  std::uint64_t state_;
};

/// Seed derivation used for per-experiment seeds: mixes the root seed with a
/// string id. Stable across platforms and builds.
std::uint64_t derive_seed(std::uint64_t root_seed, const std::string& id);

}  // namespace orchsim
