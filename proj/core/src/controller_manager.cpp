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

#include "orchsim/ctrl/controller_manager.hpp"

#include <algorithm>

namespace orchsim::ctrl {

using model::ResourceInstance;
using model::ResourceKey;

namespace {

constexpr const char* kSource = "kcm";

bool pod_live(const ResourceInstance& pod) {
  const std::string phase = pod.phase();
  return phase.empty() || phase == "Pending" || phase == "Running";
}

bool owned_by(const ResourceInstance& child, const ResourceInstance& owner) {
  return child.has_owner() && child.owner_kind() == owner.kind &&
         child.owner_name() == owner.name() && child.owner_uid() == owner.uid();
}

}  // namespace

const std::set<std::string>& ControllerManager::known_namespaces() {
  static const std::set<std::string> ns{"default", "kube-system"};
  return ns;
}

const std::vector<std::string>& ControllerManager::agent_tolerations() {
  static const std::vector<std::string> t{"reserved:NoSchedule", "maintenance:NoExecute"};
  return t;
}

ControllerManager::ControllerManager(sim::Kernel* kernel, sim::Trace* trace, cp::ApiServer* api,
                                     const run::RunConfig* cfg)
    : kernel_(kernel), trace_(trace), api_(api), cfg_(cfg), lease_("kcm", cfg->lease_ms) {}

void ControllerManager::start() {
  api_->subscribe(kSource, wire::SchemaSet::embedded().kind_names(),
                  [this](const cp::WatchEvent& ev) { on_event(ev); });
  acquire_loop();
  kernel_->schedule(cfg_->resync_ms, "kcm.resync", [this]() { resync(); });
  // Half-period phase offset: reap and node-health decisions interleave with
  // the rest of the 5s machinery instead of stacking on the same instants.
  kernel_->schedule(cfg_->sweep_period_ms / 2, "kcm.sweep", [this]() { periodic_sweep(); });
}

bool ControllerManager::is_leader() const { return elected_; }

void ControllerManager::acquire_loop() {
  if (!elected_ && lease_.try_acquire(instance_, kernel_->now())) {
    elected_ = true;
    trace_->event(kernel_->now(), "leader_elected",
                  Json{{"role", lease_.role()}, {"instance", instance_}});
    request_pass(0);
  } else if (elected_) {
    lease_.renew(instance_, kernel_->now());
  }
  kernel_->schedule(cfg_->renew_ms, "kcm.lease", [this]() { acquire_loop(); });
}

void ControllerManager::on_event(const cp::WatchEvent& ev) {
  cache_.apply(ev, kernel_->now());
  request_pass(cfg_->debounce_ms);
}

void ControllerManager::request_pass(sim::SimTime delay) {
  const sim::SimTime at = kernel_->now() + delay;
  if (pass_pending_ && at >= next_pass_at_) return;
  pass_pending_ = true;
  next_pass_at_ = at;
  kernel_->schedule(delay, "kcm.pass", [this]() { pass(); });
}

void ControllerManager::resync() {
  for (const std::string& kind : wire::SchemaSet::embedded().kind_names()) {
    cp::ApiResponse r = api_->list(kSource, kind);
    if (r.ok) cache_.replace_kind(kind, r.items, kernel_->now());
  }
  request_pass(0);
  kernel_->schedule(cfg_->resync_ms, "kcm.resync", [this]() { resync(); });
}

void ControllerManager::periodic_sweep() {
  if (elected_) {
    writes_this_pass_ = 0;
    node_lifecycle();
    stale_pending_sweep();
  }
  kernel_->schedule(cfg_->sweep_period_ms, "kcm.sweep", [this]() { periodic_sweep(); });
}

void ControllerManager::pass() {
  pass_pending_ = false;
  if (!elected_) return;
  ++passes_;
  writes_this_pass_ = 0;
  created_this_pass_.clear();

  reconcile_system_daemons();
  reconcile_deployments();
  reconcile_replicasets();
  reconcile_daemonsets();
  reconcile_endpoints();
  reconcile_taint_evictions();
  reconcile_janitor();
  reconcile_gc();
}

bool ControllerManager::do_write(cp::Op op, const ResourceKey& key, const wire::FieldMap& fields) {
  // Node writes are excluded from the attempt tally for the same reason the
  // server excludes them from the applied tally: the stuck-detector compares
  // the two, and they must count the same traffic.
  if (key.kind != "Node") ++attempted_writes_;
  ++writes_this_pass_;
  cp::ApiResponse r = api_->write(kSource, op, key, fields);
  request_pass(cfg_->verify_requeue_ms);
  return r.ok;
}

bool ControllerManager::do_delete(const ResourceKey& key) {
  if (key.kind != "Node") ++attempted_writes_;
  ++writes_this_pass_;
  cp::ApiResponse r = api_->remove(kSource, key);
  request_pass(cfg_->verify_requeue_ms);
  return r.ok;
}

std::string ControllerManager::free_pod_name(const std::string& ns,
                                             const std::string& base) const {
  for (int k = 1;; ++k) {
    std::string candidate = base + "-" + std::to_string(k);
    ResourceKey key{"Pod", ns, candidate};
    if (!cache_.has(key) && !created_this_pass_.count(key)) return candidate;
  }
}

// ---- system daemons -------------------------------------------------------
//
// Turns the cluster's agent configs into runnable workloads: a NetworkAgent
// config becomes a DaemonSet, a DNSAgent config becomes a Deployment. The
// apply is one-way and happens only when the config's version moves, so a
// corrupted workload object stays corrupted until an operator touches the
// config again.
void ControllerManager::reconcile_system_daemons() {
  for (const ResourceInstance* cfg : cache_.list("NetworkAgent")) {
    auto it = applied_config_rv_.find(cfg->key());
    if (it != applied_config_rv_.end() && it->second == cfg->resource_version()) continue;
    if (!budget_ok()) return;

    const std::string app = cfg->fields.str_or("spec.label_app", cfg->name());
    model::Meta meta;
    meta.name = cfg->name();
    meta.ns = cfg->ns();
    meta.labels = {{"app", app}};
    meta.owner_kind = "NetworkAgent";
    meta.owner_name = cfg->name();
    meta.owner_uid = cfg->uid();
    ResourceKey ds_key{"DaemonSet", meta.ns, meta.name};
    const ResourceInstance* existing = cache_.get(ds_key);
    if (existing) meta.uid = existing->uid();

    ResourceInstance ds = model::make_basic("DaemonSet", meta);
    ds.fields.set("spec.selector.app", app);
    model::PodTemplate tpl;
    tpl.labels = {{"app", app}};
    tpl.image = cfg->fields.str_or("spec.image", "");
    tpl.command = cfg->fields.str_or("spec.command", "");
    tpl.cpu_request = cfg->fields.int_or("spec.cpu_request", 0);
    tpl.mem_request = cfg->fields.int_or("spec.mem_request", 0);
    tpl.priority = cfg->fields.int_or("spec.priority", 0);
    tpl.tolerations = agent_tolerations();
    model::write_template(ds, tpl);

    if (do_write(existing ? cp::Op::update : cp::Op::create, ds_key, ds.fields)) {
      applied_config_rv_[cfg->key()] = cfg->resource_version();
    }
  }

  for (const ResourceInstance* cfg : cache_.list("DNSAgent")) {
    auto it = applied_config_rv_.find(cfg->key());
    if (it != applied_config_rv_.end() && it->second == cfg->resource_version()) continue;
    if (!budget_ok()) return;

    const std::string app = cfg->fields.str_or("spec.label_app", cfg->name());
    model::Meta meta;
    meta.name = cfg->name();
    meta.ns = cfg->ns();
    meta.labels = {{"app", app}};
    meta.owner_kind = "DNSAgent";
    meta.owner_name = cfg->name();
    meta.owner_uid = cfg->uid();
    ResourceKey dep_key{"Deployment", meta.ns, meta.name};
    const ResourceInstance* existing = cache_.get(dep_key);
    if (existing) meta.uid = existing->uid();

    ResourceInstance dep = model::make_basic("Deployment", meta);
    dep.fields.set("spec.replicas", cfg->fields.int_or("spec.replicas", 1));
    dep.fields.set("spec.selector.app", app);
    model::PodTemplate tpl;
    tpl.labels = {{"app", app}};
    tpl.image = cfg->fields.str_or("spec.image", "");
    tpl.command = cfg->fields.str_or("spec.command", "");
    tpl.cpu_request = cfg->fields.int_or("spec.cpu_request", 0);
    tpl.mem_request = cfg->fields.int_or("spec.mem_request", 0);
    tpl.priority = cfg->fields.int_or("spec.priority", 0);
    model::write_template(dep, tpl);

    if (do_write(existing ? cp::Op::update : cp::Op::create, dep_key, dep.fields)) {
      applied_config_rv_[cfg->key()] = cfg->resource_version();
    }
  }
}

// ---- deployments ----------------------------------------------------------
void ControllerManager::reconcile_deployments() {
  for (const ResourceInstance* dep : cache_.list("Deployment")) {
    const model::PodTemplate tpl = model::read_template(*dep);
    const std::string rs_name = dep->name() + "-" + model::template_hash(tpl);
    const ResourceKey rs_key{"ReplicaSet", dep->ns(), rs_name};

    // Roll over: any other replica set owned by this deployment goes away.
    for (const ResourceInstance* rs : cache_.list("ReplicaSet", dep->ns())) {
      if (owned_by(*rs, *dep) && rs->name() != rs_name && budget_ok()) {
        do_delete(rs->key());
      }
    }

    const ResourceInstance* existing = cache_.get(rs_key);
    if (existing) {
      const bool differs = existing->replicas() != dep->replicas() ||
                           existing->selector() != dep->selector() ||
                           model::read_template(*existing) != tpl;
      if (!differs || !budget_ok()) continue;
    } else if (!budget_ok()) {
      continue;
    }

    model::Meta meta;
    meta.name = rs_name;
    meta.ns = dep->ns();
    meta.labels = dep->labels();
    meta.owner_kind = "Deployment";
    meta.owner_name = dep->name();
    meta.owner_uid = dep->uid();
    if (existing) meta.uid = existing->uid();
    ResourceInstance rs = model::make_basic("ReplicaSet", meta);
    rs.fields.set("spec.replicas", dep->replicas());
    for (const auto& [k, v] : dep->selector()) rs.fields.set("spec.selector." + k, v);
    model::write_template(rs, tpl);
    do_write(existing ? cp::Op::update : cp::Op::create, rs_key, rs.fields);
  }
}

// ---- replica sets ---------------------------------------------------------
void ControllerManager::reconcile_replicasets() {
  for (const ResourceInstance* rs : cache_.list("ReplicaSet")) {
    const model::PodTemplate tpl = model::read_template(*rs);
    const auto selector = rs->selector();

    std::vector<const ResourceInstance*> live;
    for (const ResourceInstance* pod : cache_.list("Pod", rs->ns())) {
      bool mine = owned_by(*pod, *rs);
      if (!mine && !pod->has_owner() && model::selector_matches(selector, pod->labels())) {
        // Orphan adoption: claim it, guarded against concurrent writers.
        if (budget_ok()) {
          ResourceInstance adopted = *pod;
          adopted.fields.set("metadata.owner_kind", std::string("ReplicaSet"));
          adopted.fields.set("metadata.owner_name", rs->name());
          adopted.fields.set("metadata.owner_uid", rs->uid());
          do_write(cp::Op::update, pod->key(), adopted.fields);
        }
        mine = true;
      }
      if (!mine) continue;
      if (pod->phase() == "Failed") {
        if (budget_ok()) do_delete(pod->key());
        continue;
      }
      // A terminating pod still holds its replica slot until the runtime
      // finishes tearing it down; replacing it early would double capacity
      // use and turn every delete into a creation burst.
      live.push_back(pod);
    }

    const std::int64_t desired = rs->replicas();
    if (static_cast<std::int64_t>(live.size()) < desired) {
      for (std::int64_t i = live.size(); i < desired && budget_ok(); ++i) {
        model::Meta meta;
        meta.name = free_pod_name(rs->ns(), rs->name());
        meta.ns = rs->ns();
        meta.owner_kind = "ReplicaSet";
        meta.owner_name = rs->name();
        meta.owner_uid = rs->uid();
        ResourceInstance pod = model::make_pod_from_template(meta, tpl);
        created_this_pass_.insert(ResourceKey{"Pod", meta.ns, meta.name});
        do_write(cp::Op::create, pod.key(), pod.fields);
      }
    } else if (static_cast<std::int64_t>(live.size()) > desired) {
      // Scale down not-ready pods first, then the highest ordinals. Pods
      // already terminating count against the excess but need no new delete.
      std::vector<const ResourceInstance*> victims = live;
      std::sort(victims.begin(), victims.end(),
                [](const ResourceInstance* a, const ResourceInstance* b) {
                  if (a->ready() != b->ready()) return !a->ready();
                  return a->name() > b->name();
                });
      const std::int64_t excess = victims.size() - desired;
      for (std::int64_t i = 0; i < excess && budget_ok(); ++i) {
        if (victims[i]->phase() == "Terminating") continue;
        do_delete(victims[i]->key());
      }
    }
  }
}

// ---- daemon sets ----------------------------------------------------------
//
// Children are recognized by label match plus node assignment, never by
// name: a node missing its daemon pod gets a fresh one under a fresh name.
void ControllerManager::reconcile_daemonsets() {
  for (const ResourceInstance* ds : cache_.list("DaemonSet")) {
    const model::PodTemplate tpl = model::read_template(*ds);
    const auto selector = ds->selector();

    for (const ResourceInstance* nd : cache_.list("Node")) {
      bool eligible = true;
      for (const std::string& ts : nd->taints()) {
        auto taint = model::parse_taint(ts);
        if (taint && !model::taint_tolerated(*taint, tpl.tolerations)) {
          eligible = false;
          break;
        }
      }

      std::vector<const ResourceInstance*> children;
      for (const ResourceInstance* pod : cache_.list("Pod", ds->ns())) {
        if (pod->node_name() != nd->name()) continue;
        if (!model::selector_matches(selector, pod->labels())) continue;
        if (pod_live(*pod)) children.push_back(pod);
      }

      if (!eligible) {
        for (const ResourceInstance* pod : children) {
          if (budget_ok()) do_delete(pod->key());
        }
        continue;
      }
      if (children.empty()) {
        if (!budget_ok()) continue;
        // One create per node per verification window: the controller waits
        // for its previous create to show up as a matching child before
        // concluding it went missing. Without this, a child that never
        // matches (say, a corrupted selector) turns every pass into another
        // creation.
        const std::string slot = ds->key().str() + "@" + nd->name();
        auto last = ds_created_at_.find(slot);
        if (last != ds_created_at_.end() &&
            kernel_->now() - last->second < cfg_->verify_requeue_ms) {
          continue;
        }
        ds_created_at_[slot] = kernel_->now();
        const std::string base = ds->name() + "-" + nd->name();
        std::string name = base;
        if (cache_.has(ResourceKey{"Pod", ds->ns(), base}) ||
            created_this_pass_.count(ResourceKey{"Pod", ds->ns(), base})) {
          name = free_pod_name(ds->ns(), base);
        }
        model::Meta meta;
        meta.name = name;
        meta.ns = ds->ns();
        meta.owner_kind = "DaemonSet";
        meta.owner_name = ds->name();
        meta.owner_uid = ds->uid();
        ResourceInstance pod = model::make_pod_from_template(meta, tpl, nd->name());
        created_this_pass_.insert(pod.key());
        do_write(cp::Op::create, pod.key(), pod.fields);
      } else if (children.size() > 1) {
        std::sort(children.begin(), children.end(),
                  [](const ResourceInstance* a, const ResourceInstance* b) {
                    return a->name() < b->name();
                  });
        for (std::size_t i = 1; i < children.size() && budget_ok(); ++i) {
          do_delete(children[i]->key());
        }
      }
    }
  }
}

// ---- endpoints ------------------------------------------------------------
void ControllerManager::reconcile_endpoints() {
  for (const ResourceInstance* svc : cache_.list("Service")) {
    const auto selector = svc->selector();
    std::vector<std::string> addrs;
    for (const ResourceInstance* pod : cache_.list("Pod", svc->ns())) {
      if (!model::selector_matches(selector, pod->labels())) continue;
      if (pod->phase() != "Running" || !pod->ready()) continue;
      const std::string ip = pod->fields.str_or("status.pod_ip", "");
      if (!ip.empty()) addrs.push_back(ip);
    }
    std::sort(addrs.begin(), addrs.end());

    const ResourceKey ep_key{"Endpoints", svc->ns(), svc->name()};
    const ResourceInstance* existing = cache_.get(ep_key);
    if (existing) {
      const bool differs =
          existing->string_list("subsets.addresses") != addrs ||
          existing->fields.int_or("subsets.port", 0) != svc->fields.int_or("spec.port", 0) ||
          existing->fields.str_or("subsets.protocol", "") !=
              svc->fields.str_or("spec.protocol", "");
      if (!differs || !budget_ok()) continue;
    } else if (!budget_ok()) {
      continue;
    }

    model::Meta meta;
    meta.name = svc->name();
    meta.ns = svc->ns();
    meta.owner_kind = "Service";
    meta.owner_name = svc->name();
    meta.owner_uid = svc->uid();
    if (existing) meta.uid = existing->uid();
    ResourceInstance ep = model::make_basic("Endpoints", meta);
    for (const std::string& a : addrs) ep.fields.add("subsets.addresses", a);
    ep.fields.set("subsets.port", svc->fields.int_or("spec.port", 0));
    ep.fields.set("subsets.protocol", svc->fields.str_or("spec.protocol", "TCP"));
    do_write(existing ? cp::Op::update : cp::Op::create, ep_key, ep.fields);
  }
}

// ---- taint evictions ------------------------------------------------------
void ControllerManager::reconcile_taint_evictions() {
  for (const ResourceInstance* pod : cache_.list("Pod")) {
    if (pod->phase() == "Terminating" || pod->node_name().empty()) continue;
    const ResourceInstance* nd =
        cache_.get(ResourceKey{"Node", model::kSystemNamespace, pod->node_name()});
    if (!nd) continue;
    for (const std::string& ts : nd->taints()) {
      auto taint = model::parse_taint(ts);
      if (!taint || taint->effect != "NoExecute") continue;
      if (!model::taint_tolerated(*taint, pod->tolerations()) && budget_ok()) {
        ++evictions_;
        trace_->event(kernel_->now(), "pod_evicted",
                      Json{{"pod", pod->key().str()},
                           {"node", pod->node_name()},
                           {"reason", "taint"}});
        do_delete(pod->key());
        break;
      }
    }
  }
}

// ---- janitor --------------------------------------------------------------
//
// Pods in a namespace this cluster does not know are foreign workloads and
// get reaped. Only pods: reaping does not chase whatever controller object
// put them there.
void ControllerManager::reconcile_janitor() {
  for (const ResourceInstance* pod : cache_.list("Pod")) {
    if (known_namespaces().count(pod->key().ns)) continue;
    if (pod->phase() == "Terminating") continue;
    if (budget_ok()) do_delete(pod->key());
  }
}

// ---- garbage collection ---------------------------------------------------
void ControllerManager::reconcile_gc() {
  for (const char* kind : {"Pod", "ReplicaSet", "DaemonSet", "Deployment", "Endpoints"}) {
    for (const ResourceInstance* obj : cache_.list(kind)) {
      if (!obj->has_owner()) continue;
      const ResourceInstance* owner =
          cache_.get(ResourceKey{obj->owner_kind(), obj->key().ns, obj->owner_name()});
      const bool orphaned = !owner || owner->uid() != obj->owner_uid();
      if (orphaned && budget_ok()) do_delete(obj->key());
    }
  }

  // Finalize terminating pods that no live node will ever clean up.
  for (const ResourceInstance* pod : cache_.list("Pod")) {
    if (pod->phase() != "Terminating") continue;
    const ObjectCache::Meta* m = cache_.meta(pod->key());
    if (!m || m->terminating_since < 0) continue;
    if (kernel_->now() - m->terminating_since < cfg_->pod_grace_ms) continue;
    const std::string node = pod->node_name();
    const ResourceInstance* nd =
        node.empty() ? nullptr : cache_.get(ResourceKey{"Node", model::kSystemNamespace, node});
    const bool node_alive = nd && nd->fields.bool_or("status.ready", false);
    if (!node_alive && budget_ok()) do_delete(pod->key());
  }
}

// ---- node lifecycle -------------------------------------------------------
void ControllerManager::node_lifecycle() {
  const auto nodes = cache_.list("Node");
  if (nodes.empty()) return;

  int healthy = 0;
  for (const ResourceInstance* nd : nodes) {
    const sim::SimTime hb = nd->fields.int_or("status.last_heartbeat", 0);
    if (kernel_->now() - hb <= cfg_->node_grace_ms) ++healthy;
  }
  const bool full_disruption = healthy == 0;
  if (full_disruption != full_disruption_) {
    full_disruption_ = full_disruption;
    trace_->event(kernel_->now(), full_disruption ? "full_disruption_on" : "full_disruption_off",
                  Json{{"healthy_nodes", healthy}});
  }

  for (const ResourceInstance* nd : nodes) {
    const sim::SimTime hb = nd->fields.int_or("status.last_heartbeat", 0);
    const bool stale = kernel_->now() - hb > cfg_->node_grace_ms;
    const bool marked_ready = nd->fields.bool_or("status.ready", false);

    if (stale && marked_ready && budget_ok()) {
      ResourceInstance upd = *nd;
      upd.fields.set("status.ready", false);
      do_write(cp::Op::update, nd->key(), upd.fields);
    }
    if (stale && !not_ready_since_.count(nd->name())) {
      not_ready_since_[nd->name()] = kernel_->now();
    }
    if (!stale) {
      not_ready_since_.erase(nd->name());
      if (!marked_ready && budget_ok()) {
        ResourceInstance upd = *nd;
        upd.fields.set("status.ready", true);
        do_write(cp::Op::update, nd->key(), upd.fields);
      }
      continue;
    }

    // Evictions pause entirely when every node looks dead: at that point
    // the detector itself is the prime suspect.
    if (full_disruption_) continue;
    auto since = not_ready_since_.find(nd->name());
    if (since == not_ready_since_.end()) continue;
    if (kernel_->now() - since->second < cfg_->eviction_delay_ms) continue;
    for (const ResourceInstance* pod : cache_.list("Pod")) {
      if (pod->node_name() != nd->name()) continue;
      if (pod->phase() == "Terminating") continue;
      if (pod->owner_kind() == "DaemonSet") continue;  // daemons ride out node loss
      if (!budget_ok()) break;
      ++evictions_;
      trace_->event(kernel_->now(), "pod_evicted",
                    Json{{"pod", pod->key().str()},
                         {"node", nd->name()},
                         {"reason", "node_lost"}});
      do_delete(pod->key());
    }
  }
}

// ---- stuck pending reaper -------------------------------------------------
void ControllerManager::stale_pending_sweep() {
  for (const ResourceInstance* pod : cache_.list("Pod")) {
    const std::string phase = pod->phase();
    if (!(phase.empty() || phase == "Pending")) continue;
    const ObjectCache::Meta* m = cache_.meta(pod->key());
    if (!m || m->pending_since < 0) continue;
    if (kernel_->now() - m->pending_since <= cfg_->stale_pending_ms) continue;
    if (!budget_ok()) break;
    trace_->event(kernel_->now(), "stuck_pending_reaped",
                  Json{{"pod", pod->key().str()}, {"pending_ms", kernel_->now() - m->pending_since}});
    do_delete(pod->key());
  }
}

}  // namespace orchsim::ctrl
