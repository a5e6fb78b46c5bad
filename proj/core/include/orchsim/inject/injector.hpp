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

#include <map>
#include <string>

#include "orchsim/cp/channel.hpp"
#include "orchsim/inject/spec.hpp"
#include "orchsim/sim/kernel.hpp"
#include "orchsim/wire/schema.hpp"

namespace orchsim::inject {

// Applies one InjectionSpec to the message flow. The injector sits invisibly
// on the channels: it never writes the trace and never draws randomness, so
// an armed-but-never-fired run is byte-identical to a run with no injector.
class Injector {
 public:
  enum class Action { pass, drop };

  Injector(const wire::SchemaSet* schema, InjectionSpec spec);

  // Validates the spec against the schema. Throws ConfigError on an unknown
  // kind, a field path the kind does not carry, a value of the wrong type,
  // or a nonsensical combination (both field and raw target, when < 1, ...).
  void arm();

  // Channel tap for in-flight messages. May rewrite msg.payload in place.
  Action intercept(cp::WireMessage& msg, sim::SimTime now);

  // Storage tap, called once per applied write with the stored bytes.
  // Returns true when the bytes were just mutated.
  bool on_applied_write(const model::ResourceKey& key, wire::Bytes& stored, sim::SimTime now);

  // Read-side visibility hook, drives the `activated` outcome flag.
  void note_access(const model::ResourceKey& key, sim::SimTime now);

  const InjectionOutcome& outcome() const { return outcome_; }
  const InjectionSpec& spec() const { return spec_; }

 private:
  bool matches(const cp::ChannelId& channel, const model::ResourceKey& key) const;
  // Consumes the single shot. Returns Action::drop only for Drop faults.
  Action fire(wire::Bytes& payload, const model::ResourceKey& key, sim::SimTime now);
  bool apply_field_fault(wire::Bytes& payload, const model::ResourceKey& key);
  bool apply_raw_fault(wire::Bytes& payload);

  const wire::SchemaSet* schema_;
  InjectionSpec spec_;
  InjectionOutcome outcome_;
  bool spent_ = false;
  model::ResourceKey target_key_;
  std::map<model::ResourceKey, int> occurrences_;
};

}  // namespace orchsim::inject
