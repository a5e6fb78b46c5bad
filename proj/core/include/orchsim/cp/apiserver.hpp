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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/cp/channel.hpp"
#include "orchsim/cp/store.hpp"
#include "orchsim/inject/injector.hpp"
#include "orchsim/model/validate.hpp"
#include "orchsim/sim/kernel.hpp"
#include "orchsim/wire/schema.hpp"

namespace orchsim::cp {

struct ApiResponse {
  bool ok = false;
  // decode | validation | conflict | not_found | already_exists | stalled
  std::string error_kind;
  std::string error_detail;
  std::int64_t version = 0;
  std::optional<model::ResourceInstance> item;
  std::vector<model::ResourceInstance> items;

  static ApiResponse success(std::int64_t version = 0);
  static ApiResponse fail(std::string kind, std::string detail = "");
};

struct WatchEvent {
  enum class Type { added, modified, deleted };
  Type type = Type::added;
  model::ResourceKey key;
  std::int64_t version = 0;
  std::optional<model::ResourceInstance> instance;  // absent for deleted
};

// The only component that interprets bytes. Requests arrive as encoded
// payloads; the server decodes, validates, acknowledges, and only then
// forwards to storage, so a fault injected on the storage hop is invisible
// to the requester. The storage key is derived from the payload that
// actually arrives at the store: corrupt identity fields land the write
// under the corrupted key while the original entry stays behind.
class ApiServer {
 public:
  ApiServer(sim::Kernel* kernel, sim::Trace* trace, const wire::SchemaSet* schema);

  void set_injector(inject::Injector* injector) { injector_ = injector; }

  // Called once per applied create/update with the bytes as announced to
  // watchers. Tooling tap (field recording, propagation checks); a server
  // without an observer behaves identically.
  using StoreObserver =
      std::function<void(Op op, const model::ResourceKey& key, const wire::Bytes& bytes)>;
  void set_store_observer(StoreObserver fn) { observer_ = std::move(fn); }

  ApiResponse handle(WireMessage msg);

  // Encode-and-send conveniences for in-process components.
  ApiResponse write(const std::string& source, Op op, const model::ResourceKey& key,
                    const wire::FieldMap& fields);
  ApiResponse remove(const std::string& source, const model::ResourceKey& key);
  ApiResponse get(const std::string& source, const model::ResourceKey& key);
  ApiResponse list(const std::string& source, const std::string& kind, const std::string& ns = "");

  using WatchFn = std::function<void(const WatchEvent&)>;
  // Watches are exactly-once per applied transaction, delivered one
  // millisecond after the write in version order, already decoded.
  void subscribe(const std::string& subscriber, std::vector<std::string> kinds, WatchFn fn);

  Store& store() { return store_; }
  const Store& store() const { return store_; }

  std::int64_t applied_writes() const { return applied_writes_; }
  sim::SimTime last_applied_write() const { return last_applied_write_; }

  // Request and error tallies per source component, for reporting.
  Json traffic_summary() const;
  std::int64_t requests_from(const std::string& source) const;
  std::int64_t errors_from(const std::string& source) const;

  // Grace period between marking a pod Terminating and honouring the
  // follow-up delete that actually removes it.
  static constexpr sim::SimTime kPodGraceMs = 2000;

 private:
  ApiResponse handle_write(WireMessage& msg);
  ApiResponse handle_get(const WireMessage& msg);
  ApiResponse handle_list(const WireMessage& msg);

  void apply_and_fanout(Op op, const model::ResourceKey& request_key, wire::Bytes bytes);
  void fanout(WatchEvent ev);
  // Entry bytes that no longer decode are deleted on sight and announced as
  // a deletion; readers never observe a half-broken object.
  void discard_entry(const model::ResourceKey& key, const std::string& reason);
  std::optional<model::ResourceInstance> read_entry(const model::ResourceKey& key);

  void trace_message(const ChannelId& channel, const model::ResourceKey& key, Op op,
                     const std::string& outcome);
  ApiResponse finish(const WireMessage& msg, ApiResponse r);
  std::string next_uid();

  sim::Kernel* kernel_;
  sim::Trace* trace_;
  const wire::SchemaSet* schema_;
  inject::Injector* injector_ = nullptr;
  StoreObserver observer_;
  Store store_;

  struct Subscription {
    std::string subscriber;
    std::vector<std::string> kinds;
    WatchFn fn;
  };
  std::vector<Subscription> subs_;

  std::int64_t uid_counter_ = 0;
  std::int64_t applied_writes_ = 0;
  sim::SimTime last_applied_write_ = 0;
  std::map<std::pair<std::string, model::ResourceKey>, std::int64_t> occurrence_;
  std::map<std::string, std::int64_t> requests_;
  std::map<std::string, std::map<std::string, std::int64_t>> errors_;
};

}  // namespace orchsim::cp
