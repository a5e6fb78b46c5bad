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

#include <optional>

#include "orchsim/wire/codec.hpp"

namespace orchsim::wire {

/// Flips one bit of a decoded field value.
/// Integers: bit_index is 1-based from the least significant bit, so the
/// value changes by +/- 2^(bit_index-1). Booleans invert. Strings: bit_index
/// selects character 1 or 2 and flips that character's least significant bit.
/// Returns nullopt when the flip is not applicable (short string, index out
/// of range).
std::optional<Value> flip_bit_in_field(const Value& v, std::uint32_t bit_index);

/// Flips bit `bit` (0..7) of the byte at `offset` in place, with no
/// re-canonicalization. Returns false when offset is out of range.
bool flip_raw_byte(Bytes& bytes, std::size_t offset, std::uint32_t bit);

}  // namespace orchsim::wire
