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
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "orchsim/cp/channel.hpp"
#include "orchsim/jsonx.hpp"
#include "orchsim/wire/codec.hpp"

namespace orchsim::inject {

// Flip one bit of a decoded field value. bit_index is 1-based from the least
// significant bit; for strings it selects the character whose low bit flips.
struct BitFlip {
  int bit_index = 1;
};

// Replace the field value outright. May introduce a field the message lacked.
struct ValueSet {
  wire::Value value;
};

// Swallow the message. The sender still sees success.
struct Drop {};

using Fault = std::variant<BitFlip, ValueSet, Drop>;

// Byte-level target used instead of a field path: flip `bit` (0..7) of the
// payload byte at `offset`, bypassing the codec entirely.
struct RawTarget {
  std::size_t offset = 0;
  int bit = 0;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment's fault plan. The spec matches messages on a channel by
// kind (and optionally namespace/name), counts write occurrences per object,
// and applies the fault the first time any object reaches `when`.
struct InjectionSpec {
  std::string id;
  cp::ChannelId channel;
  std::string kind;
  std::string ns;    // empty matches any namespace
  std::string name;  // empty matches any name
  std::optional<std::string> field;
  std::optional<RawTarget> raw;
  Fault fault = Drop{};
  int when = 1;

  Json to_json() const;
  static InjectionSpec from_json(const Json& j);

  const char* fault_name() const;
};

// What an armed spec ended up doing, for the experiment record.
struct InjectionOutcome {
  bool armed = false;
  bool fired = false;
  std::int64_t fired_at = -1;
  std::string target;  // envelope key the fault hit, "kind/ns/name"
  std::string not_applicable_reason;
  std::string pre_value;
  std::string post_value;
  bool activated = false;  // the mutated object was read after the fault
  std::int64_t activated_at = -1;

  Json to_json() const;
};

}  // namespace orchsim::inject
