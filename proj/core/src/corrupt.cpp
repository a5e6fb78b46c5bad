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

#include "orchsim/wire/corrupt.hpp"

namespace orchsim::wire {

std::optional<Value> flip_bit_in_field(const Value& v, std::uint32_t bit_index) {
  if (bit_index == 0) return std::nullopt;
  if (std::holds_alternative<std::int64_t>(v)) {
    if (bit_index > 64) return std::nullopt;
    const std::int64_t flipped =
        std::get<std::int64_t>(v) ^ static_cast<std::int64_t>(1ull << (bit_index - 1));
    return Value(flipped);
  }
  if (std::holds_alternative<bool>(v)) {
    return Value(!std::get<bool>(v));
  }
  std::string s = std::get<std::string>(v);
  if (s.size() < bit_index) return std::nullopt;  // character to flip does not exist
  s[bit_index - 1] = static_cast<char>(s[bit_index - 1] ^ 0x01);
  return Value(std::move(s));
}

bool flip_raw_byte(Bytes& bytes, std::size_t offset, std::uint32_t bit) {
  if (offset >= bytes.size() || bit > 7) return false;
  bytes[offset] = static_cast<std::uint8_t>(bytes[offset] ^ (1u << bit));
  return true;
}

}  // namespace orchsim::wire
