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
#include <string>

#include "orchsim/model/resource.hpp"
#include "orchsim/wire/codec.hpp"

namespace orchsim::cp {

// Message paths through the control plane. to_api carries requests from a
// component into the API server, to_store carries the validated payload from
// the API server to storage, at_rest addresses bytes already stored.
enum class ChannelType { to_api, to_store, at_rest };

struct ChannelId {
  ChannelType type = ChannelType::to_api;
  // Requesting component for to_api ("user", "kcm", "scheduler",
  // "kubelet:w1", ...). Empty for to_store and at_rest.
  std::string source;

  std::string str() const;
  static std::optional<ChannelId> parse(const std::string& text);

  // True when `concrete` is covered by this id used as a pattern. An empty
  // source matches any source; "kubelet" matches "kubelet:w2".
  bool covers(const ChannelId& concrete) const;

  bool operator==(const ChannelId&) const = default;
};

enum class Op { create, update, del, get, list };

const char* op_name(Op op);
std::optional<Op> op_from_name(const std::string& name);

inline bool is_write(Op op) { return op == Op::create || op == Op::update || op == Op::del; }

// One message on a channel: the envelope names the object, the payload is an
// opaque byte string until the API server decodes it.
struct WireMessage {
  ChannelId channel;
  model::ResourceKey key;
  Op op = Op::create;
  wire::Bytes payload;
};

}  // namespace orchsim::cp
