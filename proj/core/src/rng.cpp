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

#include "orchsim/rng.hpp"

#include "orchsim/jsonx.hpp"

namespace orchsim {

namespace {
std::uint64_t splitmix64_step(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace

Rng Rng::child(std::uint64_t root_seed, const std::string& stream_name) {
  std::uint64_t s = fnv1a64(stream_name, root_seed ^ 0xa5a5a5a5a5a5a5a5ull);
  // One warm-up step so short names do not yield correlated first draws.
  splitmix64_step(s);
  return Rng(s);
}

std::uint64_t Rng::next_u64() { return splitmix64_step(state_); }

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::u01() {
  // 53 bits of mantissa, standard conversion.
  return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

double Rng::uniform_real(double lo, double hi) { return lo + (hi - lo) * u01(); }

std::uint64_t derive_seed(std::uint64_t root_seed, const std::string& id) {
  std::uint64_t s = fnv1a64(id, root_seed ^ 0x5bd1e995ull);
  splitmix64_step(s);
  return s;
}

}  // namespace orchsim
