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

#include "orchsim/node/node_agent.hpp"

#include <algorithm>
#include <vector>

namespace orchsim::node {

using model::ResourceInstance;
using model::ResourceKey;

namespace {
constexpr sim::SimTime kCrashRunMs = 1000;
}

NodeAgent::NodeAgent(sim::Kernel* kernel, sim::Trace* trace, cp::ApiServer* api,
                     const run::RunConfig* cfg, std::string node_name, int node_index,
                     std::uint64_t seed)
    : kernel_(kernel),
      trace_(trace),
      api_(api),
      cfg_(cfg),
      name_(std::move(node_name)),
      index_(node_index),
      source_("kubelet:" + name_),
      rng_(Rng::child(seed, source_)) {}

bool NodeAgent::image_known(const std::string& image) {
  static const std::set<std::string> known{"webapp:1.0", "netagent:1.5", "coredns:2.0"};
  return known.count(image) > 0;
}

bool NodeAgent::command_runs(const std::string& command) {
  static const std::set<std::string> runnable{"serve", "agent", "dns"};
  return runnable.count(command) > 0;
}

bool NodeAgent::muted() const {
  for (const auto& m : cfg_->mute_heartbeats) {
    if (m == "*" || m == name_) return true;
  }
  return false;
}

void NodeAgent::start() {
  api_->subscribe(source_, {"Pod"}, [this](const cp::WatchEvent& ev) { on_event(ev); });
  hb_offset_ = static_cast<sim::SimTime>(rng_.uniform(0, cfg_->heartbeat_ms - 1));
  kernel_->schedule(hb_offset_, "node.heartbeat", [this]() { heartbeat(); });
  kernel_->schedule(hb_offset_ + cfg_->status_sync_ms, "node.sync", [this]() { sync(); });
}

void NodeAgent::heartbeat() {
  kernel_->schedule(cfg_->heartbeat_ms, "node.heartbeat", [this]() { heartbeat(); });
  if (muted()) return;
  const ResourceKey key{"Node", model::kSystemNamespace, name_};
  cp::ApiResponse r = api_->get(source_, key);
  if (!r.ok || !r.item) return;
  ResourceInstance nd = *r.item;
  nd.fields.set("status.ready", true);
  nd.fields.set("status.last_heartbeat", kernel_->now());
  nd.fields.set("metadata.resource_version", std::int64_t{0});  // last writer wins
  api_->write(source_, cp::Op::update, key, nd.fields);
}

std::int64_t NodeAgent::used_cpu() const {
  std::int64_t sum = 0;
  for (const auto& [_, rt] : run_) {
    if (rt.admitted) sum += rt.cpu;
  }
  return sum;
}

std::int64_t NodeAgent::used_mem() const {
  std::int64_t sum = 0;
  for (const auto& [_, rt] : run_) {
    if (rt.admitted) sum += rt.mem;
  }
  return sum;
}

int NodeAgent::admitted() const {
  int n = 0;
  for (const auto& [_, rt] : run_) n += rt.admitted ? 1 : 0;
  return n;
}

void NodeAgent::on_event(const cp::WatchEvent& ev) {
  if (ev.key.kind != "Pod") return;
  if (ev.type == cp::WatchEvent::Type::deleted) {
    if (bound_.count(ev.key)) {
      release(ev.key);
      bound_.erase(ev.key);
      admit_sweep();  // freed capacity may unblock a waiting pod
    }
    return;
  }
  if (!ev.instance) return;
  const ResourceInstance& pod = *ev.instance;

  if (pod.node_name() != name_) {
    if (bound_.count(ev.key)) {
      handoff(ev.key);
      bound_.erase(ev.key);
      admit_sweep();
    }
    return;
  }

  bound_.insert_or_assign(ev.key, pod);
  if (pod.phase() == "Terminating") {
    begin_finalize(ev.key);
    return;
  }
  if (!run_.count(ev.key)) try_admit(ev.key);
}

void NodeAgent::admit_sweep() {
  for (const auto& [key, pod] : bound_) {
    if (pod.phase() == "Terminating") continue;
    if (!run_.count(key)) try_admit(key);
  }
}

bool NodeAgent::try_admit(const ResourceKey& key) {
  auto it = bound_.find(key);
  if (it == bound_.end()) return false;
  const ResourceInstance& pod = it->second;
  const std::int64_t need_cpu = pod.cpu_request();
  const std::int64_t need_mem = pod.mem_request();

  if (used_cpu() + need_cpu > cfg_->node_capacity_cpu ||
      used_mem() + need_mem > cfg_->node_capacity_mem) {
    // Make room by evicting strictly lower-priority pods, cheapest first.
    std::vector<std::pair<ResourceKey, const Runtime*>> victims;
    for (const auto& [k, rt] : run_) {
      if (!rt.admitted || rt.terminating) continue;
      const auto b = bound_.find(k);
      if (b == bound_.end()) continue;
      if (b->second.priority() < pod.priority()) victims.push_back({k, &rt});
    }
    std::sort(victims.begin(), victims.end(), [this](const auto& a, const auto& b) {
      const ResourceInstance& pa = bound_.at(a.first);
      const ResourceInstance& pb = bound_.at(b.first);
      if (pa.priority() != pb.priority()) return pa.priority() < pb.priority();
      if (a.second->restarts != b.second->restarts) return a.second->restarts < b.second->restarts;
      return a.first.name < b.first.name;
    });
    std::int64_t freeable_cpu = 0;
    std::int64_t freeable_mem = 0;
    std::size_t take = 0;
    while (take < victims.size() &&
           (used_cpu() - freeable_cpu + need_cpu > cfg_->node_capacity_cpu ||
            used_mem() - freeable_mem + need_mem > cfg_->node_capacity_mem)) {
      freeable_cpu += victims[take].second->cpu;
      freeable_mem += victims[take].second->mem;
      ++take;
    }
    const bool enough = used_cpu() - freeable_cpu + need_cpu <= cfg_->node_capacity_cpu &&
                        used_mem() - freeable_mem + need_mem <= cfg_->node_capacity_mem;
    if (enough && take > 0) {
      for (std::size_t i = 0; i < take; ++i) {
        trace_->event(kernel_->now(), "pod_preempted",
                      Json{{"node", name_},
                           {"victim", victims[i].first.str()},
                           {"for", key.str()}});
        api_->remove(source_, victims[i].first);
      }
    }
    // Either way the pod waits: evicted victims only free capacity once
    // they finish terminating.
    return false;
  }

  Runtime rt;
  rt.admitted = true;
  rt.cpu = need_cpu;
  rt.mem = need_mem;
  rt.image_ok = image_known(pod.fields.str_or("spec.image", ""));
  rt.ip = "10." + std::to_string(index_) + "." + std::to_string(++ip_counter_);
  rt.restarts = pod.fields.int_or("status.restart_count", 0);
  run_[key] = rt;

  if (!rt.image_ok) {
    run_[key].reason = "ImagePullError";
    write_status(key);
    return true;
  }
  const sim::SimTime delay =
      cfg_->startup_base_ms + static_cast<sim::SimTime>(rng_.uniform(0, cfg_->startup_jitter_ms));
  schedule_boot(key, delay);
  return true;
}

void NodeAgent::schedule_boot(const ResourceKey& key, sim::SimTime delay) {
  const std::int64_t seq = ++run_[key].boot_seq;
  kernel_->schedule(delay, "node.boot", [this, key, seq]() { boot(key, seq); });
}

void NodeAgent::boot(const ResourceKey& key, std::int64_t seq) {
  auto it = run_.find(key);
  if (it == run_.end() || it->second.boot_seq != seq || it->second.terminating) return;
  Runtime& rt = it->second;
  rt.running = true;
  rt.ready = true;
  rt.reason.clear();
  write_status(key);

  const auto b = bound_.find(key);
  const std::string cmd = b == bound_.end() ? "" : b->second.fields.str_or("spec.command", "");
  if (!command_runs(cmd)) {
    kernel_->schedule(kCrashRunMs, "node.crash", [this, key, seq]() { crash(key, seq); });
  }
}

void NodeAgent::crash(const ResourceKey& key, std::int64_t seq) {
  auto it = run_.find(key);
  if (it == run_.end() || it->second.boot_seq != seq || it->second.terminating) return;
  Runtime& rt = it->second;
  rt.ready = false;
  rt.reason = "CrashLoopBackOff";
  ++rt.restarts;
  ++rt.crashes;
  ++total_restarts_;
  write_status(key);

  sim::SimTime backoff = cfg_->crash_backoff_base_ms;
  for (int i = 1; i < rt.crashes && backoff < cfg_->crash_backoff_cap_ms; ++i) {
    backoff *= cfg_->crash_backoff_factor;
  }
  backoff = std::min(backoff, cfg_->crash_backoff_cap_ms);
  schedule_boot(key, backoff);
}

void NodeAgent::begin_finalize(const ResourceKey& key) {
  auto it = run_.find(key);
  if (it != run_.end()) {
    if (it->second.terminating) return;
    it->second.terminating = true;
    it->second.ready = false;
  }
  kernel_->schedule(cfg_->pod_grace_ms, "node.finalize", [this, key]() {
    auto b = bound_.find(key);
    if (b == bound_.end() || b->second.phase() != "Terminating") return;
    api_->remove(source_, key);  // second delete: the entry goes away
  });
}

void NodeAgent::handoff(const ResourceKey& key) {
  auto it = run_.find(key);
  if (it == run_.end()) return;
  auto b = bound_.find(key);
  if (b != bound_.end()) {
    ResourceInstance upd = b->second;
    upd.fields.set("status.phase", std::string("Pending"));
    upd.fields.set("status.ready", false);
    upd.fields.set("status.pod_ip", std::string(""));
    upd.fields.set("status.reason", std::string(""));
    api_->write(source_, cp::Op::update, key, upd.fields);
  }
  release(key);
}

void NodeAgent::stamp_status(ResourceInstance* pod, const Runtime& rt) const {
  pod->fields.set("status.phase", std::string(rt.running ? "Running" : "Pending"));
  pod->fields.set("status.ready", rt.ready);
  pod->fields.set("status.pod_ip", rt.ip);
  pod->fields.set("status.restart_count", rt.restarts);
  pod->fields.set("status.reason", rt.reason);
}

void NodeAgent::write_status(const ResourceKey& key) {
  auto b = bound_.find(key);
  auto it = run_.find(key);
  if (b == bound_.end() || it == run_.end()) return;
  ResourceInstance upd = b->second;
  stamp_status(&upd, it->second);
  cp::ApiResponse r = api_->write(source_, cp::Op::update, key, upd.fields);
  if (!r.ok && r.error_kind == "conflict") {
    // Someone, usually our own periodic sync in this same instant, bumped
    // the version underneath us. Rebase the status onto the current object
    // and try once more; a repeat conflict waits for the next sync.
    cp::ApiResponse cur = api_->get(source_, key);
    if (cur.ok && cur.item) {
      ResourceInstance fresh = *cur.item;
      stamp_status(&fresh, it->second);
      api_->write(source_, cp::Op::update, key, fresh.fields);
    }
  }
}

void NodeAgent::release(const ResourceKey& key) { run_.erase(key); }

void NodeAgent::sync() {
  kernel_->schedule(cfg_->status_sync_ms, "node.sync", [this]() { sync(); });

  // Re-list: the store is the source of truth for what should run here.
  cp::ApiResponse r = api_->list(source_, "Pod");
  if (r.ok) {
    std::set<ResourceKey> seen;
    for (const ResourceInstance& pod : r.items) {
      if (pod.node_name() != name_) continue;
      seen.insert(pod.key());
      bound_.insert_or_assign(pod.key(), pod);
      if (pod.phase() == "Terminating") {
        begin_finalize(pod.key());
      } else if (!run_.count(pod.key())) {
        try_admit(pod.key());
      }
    }
    for (auto it = bound_.begin(); it != bound_.end();) {
      if (!seen.count(it->first)) {
        if (run_.count(it->first)) release(it->first);
        it = bound_.erase(it);
      } else {
        ++it;
      }
    }
  }

  // Rewrite drifted status: our runtime is authoritative for pods we run.
  for (const auto& [key, rt] : run_) {
    auto b = bound_.find(key);
    if (b == bound_.end() || rt.terminating) continue;
    const ResourceInstance& pod = b->second;
    const bool drift = pod.phase() != (rt.running ? "Running" : "Pending") ||
                       pod.ready() != rt.ready ||
                       pod.fields.str_or("status.pod_ip", "") != rt.ip ||
                       pod.fields.int_or("status.restart_count", 0) != rt.restarts ||
                       pod.fields.str_or("status.reason", "") != rt.reason;
    if (drift) write_status(key);
  }
}

}  // namespace orchsim::node
