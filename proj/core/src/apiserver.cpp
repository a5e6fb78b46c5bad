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

#include "orchsim/cp/apiserver.hpp"

#include <cinttypes>
#include <cstdio>

namespace orchsim::cp {

using model::ResourceInstance;
using model::ResourceKey;
using wire::Bytes;
using wire::FieldMap;

ApiResponse ApiResponse::success(std::int64_t version) {
  ApiResponse r;
  r.ok = true;
  r.version = version;
  return r;
}

ApiResponse ApiResponse::fail(std::string kind, std::string detail) {
  ApiResponse r;
  r.ok = false;
  r.error_kind = std::move(kind);
  r.error_detail = std::move(detail);
  return r;
}

ApiServer::ApiServer(sim::Kernel* kernel, sim::Trace* trace, const wire::SchemaSet* schema)
    : kernel_(kernel), trace_(trace), schema_(schema) {}

std::string ApiServer::next_uid() {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "u-%06" PRId64, ++uid_counter_);
  return buf;
}

void ApiServer::subscribe(const std::string& subscriber, std::vector<std::string> kinds,
                          WatchFn fn) {
  subs_.push_back(Subscription{subscriber, std::move(kinds), std::move(fn)});
}

void ApiServer::trace_message(const ChannelId& channel, const ResourceKey& key, Op op,
                              const std::string& outcome) {
  sim::TraceEntry e;
  e.time = kernel_->now();
  e.channel = channel.str();
  e.kind = key.kind;
  e.ns = key.ns;
  e.name = key.name;
  e.operation = op_name(op);
  e.occurrence_index = ++occurrence_[{e.channel, key}];
  e.outcome = outcome;
  trace_->message(e);
}

ApiResponse ApiServer::finish(const WireMessage& msg, ApiResponse r) {
  ++requests_[msg.channel.source];
  if (!r.ok) ++errors_[msg.channel.source][r.error_kind];
  if (is_write(msg.op)) {
    trace_message(msg.channel, msg.key, msg.op, r.ok ? "ok" : "error:" + r.error_kind);
  }
  return r;
}

ApiResponse ApiServer::handle(WireMessage msg) {
  if (injector_ && injector_->intercept(msg, kernel_->now()) == inject::Injector::Action::drop) {
    // The request evaporated in flight. Nothing was received, nothing is
    // traced, and the sender is told all went well.
    ++requests_[msg.channel.source];
    return ApiResponse::success();
  }
  switch (msg.op) {
    case Op::get:
      return finish(msg, handle_get(msg));
    case Op::list:
      return finish(msg, handle_list(msg));
    default:
      return finish(msg, handle_write(msg));
  }
}

ApiResponse ApiServer::handle_write(WireMessage& msg) {
  const ResourceKey& key = msg.key;
  if (!schema_->find(key.kind)) return ApiResponse::fail("validation", "unknown kind");

  std::optional<ResourceInstance> inst;
  if (msg.op != Op::del) {
    wire::DecodeResult dr = wire::decode(schema_->at(key.kind), msg.payload);
    if (!wire::decoded_ok(dr)) {
      const auto& err = std::get<wire::DecodeError>(dr);
      return ApiResponse::fail("decode", err.reason);
    }
    inst.emplace(ResourceInstance{key.kind, std::get<FieldMap>(std::move(dr))});
    model::ValidationResult v = model::validate(*inst, key);
    if (!v.ok) return ApiResponse::fail("validation", v.reason);
  }

  const Store::Entry* entry = store_.lookup(key);
  switch (msg.op) {
    case Op::create:
      if (entry) return ApiResponse::fail("already_exists", key.str());
      if (store_.stalled()) return ApiResponse::fail("stalled", "store at capacity");
      break;
    case Op::update: {
      if (!entry) return ApiResponse::fail("not_found", key.str());
      const std::int64_t guard = inst->resource_version();
      if (guard != 0 && guard != entry->version) {
        return ApiResponse::fail("conflict", "stale resource version");
      }
      break;
    }
    case Op::del:
      if (!entry) return ApiResponse::fail("not_found", key.str());
      break;
    default:
      break;
  }

  // The request is now acknowledged; everything below runs on the storage
  // side of the fence where the requester cannot see failures.
  if (msg.op == Op::create) inst->fields.set("metadata.uid", next_uid());

  Bytes bytes;
  if (msg.op != Op::del) bytes = wire::encode(schema_->at(key.kind), inst->fields);

  WireMessage store_msg{ChannelId{ChannelType::to_store, ""}, key, msg.op, std::move(bytes)};
  if (injector_ &&
      injector_->intercept(store_msg, kernel_->now()) == inject::Injector::Action::drop) {
    return ApiResponse::success();
  }
  apply_and_fanout(store_msg.op, key, std::move(store_msg.payload));
  return ApiResponse::success(store_.last_version());
}

void ApiServer::apply_and_fanout(Op op, const ResourceKey& request_key, Bytes bytes) {
  const ChannelId store_channel{ChannelType::to_store, ""};

  if (op == Op::del) {
    const Store::Entry* entry = store_.lookup(request_key);
    if (!entry) return;
    // Pods die in two steps: the first delete only marks the pod
    // Terminating; whoever owns the pod's runtime issues the final delete
    // after the grace period.
    if (request_key.kind == "Pod") {
      wire::DecodeResult dr = wire::decode(schema_->at("Pod"), entry->bytes);
      if (wire::decoded_ok(dr)) {
        FieldMap fm = std::get<FieldMap>(std::move(dr));
        if (fm.str_or("status.phase", "") != "Terminating") {
          fm.set("status.phase", std::string("Terminating"));
          fm.set("status.ready", false);
          Bytes marked = wire::encode(schema_->at("Pod"), fm);
          apply_and_fanout(Op::update, request_key, std::move(marked));
          return;
        }
      }
    }
    const std::int64_t version = store_.erase(request_key);
    if (request_key.kind != "Node") {
      ++applied_writes_;
      last_applied_write_ = kernel_->now();
      kernel_->note_activity();
    }
    trace_message(store_channel, request_key, Op::del, "applied");
    fanout(WatchEvent{WatchEvent::Type::deleted, request_key, version, std::nullopt});
    return;
  }

  // The store files the write under whatever identity the payload claims
  // after the storage-hop faults have run.
  ResourceKey final_key = request_key;
  wire::DecodeResult dr = wire::decode(schema_->at(request_key.kind), bytes);
  if (wire::decoded_ok(dr)) {
    const auto& fm = std::get<FieldMap>(dr);
    final_key = ResourceKey{request_key.kind, fm.str_or("metadata.namespace", ""),
                            fm.str_or("metadata.name", "")};
  }

  const bool existed = store_.lookup(final_key) != nullptr;
  const Bytes announced = bytes;  // at-rest faults stay unannounced
  const std::int64_t version = store_.put(final_key, std::move(bytes), kernel_->now());
  // Node updates are dominated by heartbeats; they reset neither the
  // quiescence clock nor the applied-write counter, or a healthy idle
  // cluster would never look idle and a wedged control plane would still
  // look like it makes progress. Every consequence of a node change shows
  // up as a write to another kind.
  if (final_key.kind != "Node") {
    ++applied_writes_;
    last_applied_write_ = kernel_->now();
    kernel_->note_activity();
  }
  if (injector_) {
    injector_->on_applied_write(final_key, store_.lookup_mut(final_key)->bytes, kernel_->now());
  }
  if (observer_) observer_(op, final_key, announced);
  trace_message(store_channel, final_key, op, "applied");

  wire::DecodeResult announced_dr = wire::decode(schema_->at(final_key.kind), announced);
  if (!wire::decoded_ok(announced_dr)) {
    discard_entry(final_key, std::get<wire::DecodeError>(announced_dr).reason);
    return;
  }
  ResourceInstance inst{final_key.kind, std::get<FieldMap>(std::move(announced_dr))};
  inst.fields.set("metadata.resource_version", version);
  fanout(WatchEvent{existed ? WatchEvent::Type::modified : WatchEvent::Type::added, final_key,
                    version, std::move(inst)});
}

void ApiServer::fanout(WatchEvent ev) {
  kernel_->schedule(1, "watch", [this, ev = std::move(ev)]() {
    if (injector_) injector_->note_access(ev.key, kernel_->now());
    for (const auto& sub : subs_) {
      for (const auto& k : sub.kinds) {
        if (k == ev.key.kind) {
          sub.fn(ev);
          break;
        }
      }
    }
  });
}

void ApiServer::discard_entry(const ResourceKey& key, const std::string& reason) {
  const std::int64_t version = store_.erase(key);
  if (version == 0) return;
  trace_->event(kernel_->now(), "entry_discarded",
                Json{{"key", key.str()}, {"reason", reason}});
  kernel_->note_activity();
  fanout(WatchEvent{WatchEvent::Type::deleted, key, version, std::nullopt});
}

std::optional<ResourceInstance> ApiServer::read_entry(const ResourceKey& key) {
  const Store::Entry* entry = store_.lookup(key);
  if (!entry) return std::nullopt;
  wire::DecodeResult dr = wire::decode(schema_->at(key.kind), entry->bytes);
  if (!wire::decoded_ok(dr)) {
    discard_entry(key, std::get<wire::DecodeError>(dr).reason);
    return std::nullopt;
  }
  if (injector_) injector_->note_access(key, kernel_->now());
  ResourceInstance inst{key.kind, std::get<FieldMap>(std::move(dr))};
  inst.fields.set("metadata.resource_version", entry->version);
  return inst;
}

ApiResponse ApiServer::handle_get(const WireMessage& msg) {
  if (!schema_->find(msg.key.kind)) return ApiResponse::fail("validation", "unknown kind");
  auto inst = read_entry(msg.key);
  if (!inst) return ApiResponse::fail("not_found", msg.key.str());
  ApiResponse r = ApiResponse::success(inst->resource_version());
  r.item = std::move(inst);
  return r;
}

ApiResponse ApiServer::handle_list(const WireMessage& msg) {
  if (!schema_->find(msg.key.kind)) return ApiResponse::fail("validation", "unknown kind");
  ApiResponse r = ApiResponse::success(store_.last_version());
  for (const ResourceKey& key : store_.keys_of(msg.key.kind, msg.key.ns)) {
    if (auto inst = read_entry(key)) r.items.push_back(std::move(*inst));
  }
  return r;
}

ApiResponse ApiServer::write(const std::string& source, Op op, const ResourceKey& key,
                             const FieldMap& fields) {
  WireMessage msg;
  msg.channel = ChannelId{ChannelType::to_api, source};
  msg.key = key;
  msg.op = op;
  msg.payload = wire::encode(schema_->at(key.kind), fields);
  return handle(std::move(msg));
}

ApiResponse ApiServer::remove(const std::string& source, const ResourceKey& key) {
  WireMessage msg;
  msg.channel = ChannelId{ChannelType::to_api, source};
  msg.key = key;
  msg.op = Op::del;
  return handle(std::move(msg));
}

ApiResponse ApiServer::get(const std::string& source, const ResourceKey& key) {
  WireMessage msg;
  msg.channel = ChannelId{ChannelType::to_api, source};
  msg.key = key;
  msg.op = Op::get;
  return handle(std::move(msg));
}

ApiResponse ApiServer::list(const std::string& source, const std::string& kind,
                            const std::string& ns) {
  WireMessage msg;
  msg.channel = ChannelId{ChannelType::to_api, source};
  msg.key = ResourceKey{kind, ns, ""};
  msg.op = Op::list;
  return handle(std::move(msg));
}

std::int64_t ApiServer::requests_from(const std::string& source) const {
  auto it = requests_.find(source);
  return it == requests_.end() ? 0 : it->second;
}

std::int64_t ApiServer::errors_from(const std::string& source) const {
  auto it = errors_.find(source);
  if (it == errors_.end()) return 0;
  std::int64_t n = 0;
  for (const auto& [_, c] : it->second) n += c;
  return n;
}

Json ApiServer::traffic_summary() const {
  Json j = Json::object();
  for (const auto& [source, total] : requests_) {
    Json row;
    row["requests"] = total;
    Json errs = Json::object();
    auto it = errors_.find(source);
    if (it != errors_.end()) {
      for (const auto& [kind, count] : it->second) errs[kind] = count;
    }
    row["errors"] = errs;
    j[source.empty() ? "(internal)" : source] = row;
  }
  return j;
}

}  // namespace orchsim::cp
