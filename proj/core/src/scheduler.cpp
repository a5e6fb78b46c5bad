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

#include "orchsim/ctrl/scheduler.hpp"

#include <algorithm>

namespace orchsim::ctrl {

using model::ResourceInstance;
using model::ResourceKey;

namespace {

constexpr const char* kSource = "scheduler";

bool pod_live(const ResourceInstance& pod) {
  const std::string phase = pod.phase();
  return phase.empty() || phase == "Pending" || phase == "Running";
}

}  // namespace

Scheduler::Scheduler(sim::Kernel* kernel, sim::Trace* trace, cp::ApiServer* api,
                     const run::RunConfig* cfg)
    : kernel_(kernel), trace_(trace), api_(api), cfg_(cfg), lease_("scheduler", cfg->lease_ms) {}

void Scheduler::start() {
  api_->subscribe(kSource, {"Pod", "Node"},
                  [this](const cp::WatchEvent& ev) { on_event(ev); });
  acquire_loop();
  kernel_->schedule(cfg_->resync_ms, "scheduler.resync", [this]() { periodic_resync(); });
}

void Scheduler::acquire_loop() {
  if (!elected_ && lease_.try_acquire(instance_, kernel_->now())) {
    elected_ = true;
    trace_->event(kernel_->now(), "leader_elected",
                  Json{{"role", lease_.role()}, {"instance", instance_}});
    resync();
  } else if (elected_) {
    lease_.renew(instance_, kernel_->now());
  }
  kernel_->schedule(cfg_->renew_ms, "scheduler.lease", [this]() { acquire_loop(); });
}

void Scheduler::on_event(const cp::WatchEvent& ev) {
  cache_.apply(ev, kernel_->now());
  if (ev.type != cp::WatchEvent::Type::deleted && ev.instance && ev.key.kind == "Pod" &&
      ev.instance->phase() != "Terminating") {
    const std::string nn = ev.instance->node_name();
    // A live bound pod naming a node we have never seen means our view of
    // the cluster can no longer be trusted. Snapshot loads accept the world
    // as-is and terminating pods are no longer scheduling state; only live
    // events trip this.
    if (elected_ && !nn.empty() && !cache_.list("Node").empty() &&
        !cache_.has(ResourceKey{"Node", model::kSystemNamespace, nn})) {
      restart(ev.key, nn);
      return;
    }
  }
  request_pass(cfg_->debounce_ms);
}

void Scheduler::restart(const ResourceKey& pod, const std::string& node) {
  trace_->event(kernel_->now(), "scheduler_restart",
                Json{{"pod", pod.str()}, {"node", node}, {"instance", instance_}});
  ++restarts_;
  ++instance_;
  elected_ = false;
  cache_.clear();
}

void Scheduler::resync() {
  for (const char* kind : {"Node", "Pod"}) {
    cp::ApiResponse r = api_->list(kSource, kind);
    if (r.ok) cache_.replace_kind(kind, r.items, kernel_->now());
  }
  request_pass(0);
}

void Scheduler::periodic_resync() {
  if (elected_) resync();
  kernel_->schedule(cfg_->resync_ms, "scheduler.resync", [this]() { periodic_resync(); });
}

void Scheduler::request_pass(sim::SimTime delay) {
  const sim::SimTime at = kernel_->now() + delay;
  if (pass_pending_ && at >= next_pass_at_) return;
  pass_pending_ = true;
  next_pass_at_ = at;
  kernel_->schedule(delay, "scheduler.pass", [this]() { pass(); });
}

std::int64_t Scheduler::free_cpu(const ResourceInstance& node) const {
  std::int64_t used = 0;
  for (const ResourceInstance* pod : cache_.list("Pod")) {
    if (pod->node_name() == node.name() && pod_live(*pod)) used += pod->cpu_request();
  }
  auto it = reserved_cpu_.find(node.name());
  if (it != reserved_cpu_.end()) used += it->second;
  return node.fields.int_or("spec.capacity_cpu", 0) - used;
}

std::int64_t Scheduler::free_mem(const ResourceInstance& node) const {
  std::int64_t used = 0;
  for (const ResourceInstance* pod : cache_.list("Pod")) {
    if (pod->node_name() == node.name() && pod_live(*pod)) used += pod->mem_request();
  }
  auto it = reserved_mem_.find(node.name());
  if (it != reserved_mem_.end()) used += it->second;
  return node.fields.int_or("spec.capacity_mem", 0) - used;
}

bool Scheduler::node_eligible(const ResourceInstance& node, const ResourceInstance& pod) const {
  // Placing onto a node that stopped reporting would bounce the pod right
  // back through the eviction path.
  if (!node.fields.bool_or("status.ready", false)) return false;
  for (const std::string& ts : node.taints()) {
    auto taint = model::parse_taint(ts);
    if (taint && !model::taint_tolerated(*taint, pod.tolerations())) return false;
  }
  return true;
}

bool Scheduler::bind(const ResourceInstance& pod, const std::string& node) {
  ResourceInstance bound = pod;
  bound.fields.set("spec.node_name", node);
  cp::ApiResponse r = api_->write(kSource, cp::Op::update, pod.key(), bound.fields);
  request_pass(cfg_->verify_requeue_ms);
  if (!r.ok) return false;
  ++binds_;
  reserved_cpu_[node] += pod.cpu_request();
  reserved_mem_[node] += pod.mem_request();
  return true;
}

void Scheduler::pass() {
  pass_pending_ = false;
  if (!elected_) return;
  reserved_cpu_.clear();
  reserved_mem_.clear();

  for (const ResourceInstance* pod : cache_.list("Pod")) {
    if (!pod->node_name().empty() || !pod_live(*pod) || pod->phase() == "Running") continue;

    const ResourceInstance* best = nullptr;
    std::int64_t best_free = -1;
    for (const ResourceInstance* nd : cache_.list("Node")) {
      if (!node_eligible(*nd, *pod)) continue;
      const std::int64_t fc = free_cpu(*nd);
      if (fc < pod->cpu_request() || free_mem(*nd) < pod->mem_request()) continue;
      // Nodes iterate in name order, so a strict compare keeps the
      // smallest-named node among ties.
      if (fc > best_free) {
        best = nd;
        best_free = fc;
      }
    }
    if (best) {
      bind(*pod, best->name());
      continue;
    }
    if (pod->priority() <= 0) continue;

    // Preemption: find the node where evicting the fewest, lowest-priority
    // pods makes room.
    const ResourceInstance* chosen_node = nullptr;
    std::vector<const ResourceInstance*> chosen_victims;
    for (const ResourceInstance* nd : cache_.list("Node")) {
      if (!node_eligible(*nd, *pod)) continue;
      std::vector<const ResourceInstance*> evictable;
      for (const ResourceInstance* victim : cache_.list("Pod")) {
        if (victim->node_name() != nd->name() || !pod_live(*victim)) continue;
        if (victim->priority() < pod->priority()) evictable.push_back(victim);
      }
      std::sort(evictable.begin(), evictable.end(),
                [](const ResourceInstance* a, const ResourceInstance* b) {
                  if (a->priority() != b->priority()) return a->priority() < b->priority();
                  const auto ra = a->fields.int_or("status.restart_count", 0);
                  const auto rb = b->fields.int_or("status.restart_count", 0);
                  if (ra != rb) return ra < rb;
                  return a->name() < b->name();
                });
      std::int64_t fc = free_cpu(*nd);
      std::int64_t fm = free_mem(*nd);
      std::vector<const ResourceInstance*> victims;
      for (const ResourceInstance* victim : evictable) {
        if (fc >= pod->cpu_request() && fm >= pod->mem_request()) break;
        victims.push_back(victim);
        fc += victim->cpu_request();
        fm += victim->mem_request();
      }
      if (fc < pod->cpu_request() || fm < pod->mem_request()) continue;
      const bool better =
          !chosen_node || victims.size() < chosen_victims.size() ||
          (victims.size() == chosen_victims.size() && nd->name() < chosen_node->name());
      if (better) {
        chosen_node = nd;
        chosen_victims = std::move(victims);
      }
    }
    if (chosen_node) {
      for (const ResourceInstance* victim : chosen_victims) {
        api_->remove(kSource, victim->key());
      }
      bind(*pod, chosen_node->name());
    }
  }
}

}  // namespace orchsim::ctrl
