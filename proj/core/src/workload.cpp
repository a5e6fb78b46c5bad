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

#include "orchsim/run/workload.hpp"

namespace orchsim::run {

namespace {
constexpr const char* kNs = "default";
constexpr sim::SimTime kOpJitterMs = 400;
}  // namespace

Workload::Workload(sim::Kernel* kernel, cp::ApiServer* api, const RunConfig* cfg,
                   std::uint64_t seed, std::string name)
    : kernel_(kernel),
      api_(api),
      cfg_(cfg),
      rng_(Rng::child(seed, "workload")),
      name_(std::move(name)) {}

const std::vector<std::string>& Workload::names() {
  static const std::vector<std::string> all = {"deploy", "scale", "failover"};
  return all;
}

bool Workload::known(const std::string& name) {
  for (const auto& n : names())
    if (n == name) return true;
  return false;
}

void Workload::act(sim::SimTime at, std::function<void()> fn) {
  ++total_;
  kernel_->schedule_at(at, "workload", [this, fn = std::move(fn)] {
    fn();
    ++done_;
  });
}

void Workload::start() {
  // Shared setup. Node w4 is held back for reserved work; only the system
  // daemons tolerate its taint, so app capacity is three nodes.
  act(500, [this] {
    create_node("w1", {});
    create_node("w2", {});
    create_node("w3", {});
    create_node("w4", {"reserved:NoSchedule"});
  });
  act(800, [this] { create_agent_configs(); });
  act(1200, [this] { create_service(); });
  act(1500, [this] { create_deployment("web-0", 2); });
  act(1700, [this] { create_deployment("web-1", 2); });

  const sim::SimTime base = cfg_->traffic_start_ms;
  auto jittered = [&](sim::SimTime offset) {
    return base + offset + rng_.uniform(0, kOpJitterMs - 1);
  };

  // Config touches give the agent reconciler and its dependents fresh write
  // traffic during the observation window for every workload.
  act(jittered(3000), [this] { touch("DNSAgent", "coredns"); });
  act(jittered(5000), [this] { touch("NetworkAgent", "netagent"); });

  if (name_ == "deploy") {
    act(jittered(7000), [this] { create_deployment("web-2", 2); });
    act(jittered(13000), [this] { create_deployment("web-3", 2); });
    act(jittered(19000), [this] { create_deployment("web-4", 2); });
  } else if (name_ == "scale") {
    act(jittered(7000), [this] { scale_deployment("web-0", 3); });
    act(jittered(12000), [this] { scale_deployment("web-1", 3); });
    act(jittered(17000), [this] { scale_deployment("web-0", 4); });
    act(jittered(22000), [this] { scale_deployment("web-1", 4); });
    act(jittered(27000), [this] { scale_deployment("web-0", 5); });
    act(jittered(32000), [this] { scale_deployment("web-1", 5); });
  } else if (name_ == "failover") {
    act(jittered(5500), [this] { create_deployment("web-2", 2); });
    act(jittered(15000), [this] { add_node_taint("w1", "maintenance:NoExecute"); });
  }

  cleanup_at_ = base + cfg_->cleanup_after_ms;
  act(cleanup_at_, [this] { cleanup(); });
}

void Workload::create_node(const std::string& name, const std::vector<std::string>& taints) {
  model::ResourceInstance n =
      model::make_basic("Node", {.name = name, .ns = model::kSystemNamespace});
  n.fields.set("spec.capacity_cpu", cfg_->node_capacity_cpu);
  n.fields.set("spec.capacity_mem", cfg_->node_capacity_mem);
  for (const auto& t : taints) n.fields.add("spec.taints", t);
  n.fields.set("status.ready", true);
  n.fields.set("status.last_heartbeat", static_cast<std::int64_t>(kernel_->now()));
  api_->write(kUser, cp::Op::create, n.key(), n.fields);
}

void Workload::create_agent_configs() {
  model::ResourceInstance na =
      model::make_basic("NetworkAgent", {.name = "netagent", .ns = model::kSystemNamespace});
  na.fields.set("spec.image", std::string("netagent:1.5"));
  na.fields.set("spec.command", std::string("agent"));
  na.fields.set("spec.cpu_request", std::int64_t{500});
  na.fields.set("spec.mem_request", std::int64_t{128});
  na.fields.set("spec.priority", cfg_->agent_priority);
  na.fields.set("spec.label_app", std::string("netagent"));
  api_->write(kUser, cp::Op::create, na.key(), na.fields);

  model::ResourceInstance da =
      model::make_basic("DNSAgent", {.name = "coredns", .ns = model::kSystemNamespace});
  da.fields.set("spec.image", std::string("coredns:2.0"));
  da.fields.set("spec.command", std::string("dns"));
  da.fields.set("spec.cpu_request", std::int64_t{500});
  da.fields.set("spec.mem_request", std::int64_t{128});
  da.fields.set("spec.priority", cfg_->agent_priority);
  da.fields.set("spec.replicas", std::int64_t{2});
  da.fields.set("spec.label_app", std::string("coredns"));
  api_->write(kUser, cp::Op::create, da.key(), da.fields);
}

void Workload::create_service() {
  model::ResourceInstance svc =
      model::make_basic("Service", {.name = "web", .ns = kNs, .labels = {{"app", "web"}}});
  svc.fields.set("spec.selector.app", std::string("web"));
  svc.fields.set("spec.port", std::int64_t{80});
  svc.fields.set("spec.protocol", std::string("TCP"));
  api_->write(kUser, cp::Op::create, svc.key(), svc.fields);
}

void Workload::create_deployment(const std::string& name, std::int64_t replicas) {
  model::ResourceInstance d = model::make_basic(
      "Deployment", {.name = name, .ns = kNs, .labels = {{"app", "web"}, {"tier", name}}});
  d.fields.set("spec.replicas", replicas);
  d.fields.set("spec.selector.app", std::string("web"));
  d.fields.set("spec.selector.tier", name);
  model::PodTemplate tpl;
  tpl.labels = {{"app", "web"}, {"tier", name}};
  tpl.image = "webapp:1.0";
  tpl.command = "serve";
  tpl.cpu_request = 500;
  tpl.mem_request = 128;
  tpl.priority = cfg_->app_priority;
  model::write_template(d, tpl);
  api_->write(kUser, cp::Op::create, d.key(), d.fields);
}

// Read-modify-write; the blind write mirrors an operator applying a full
// manifest over whatever is there.
void Workload::scale_deployment(const std::string& name, std::int64_t replicas) {
  auto r = api_->get(kUser, {"Deployment", kNs, name});
  if (!r.ok || !r.item) return;
  model::ResourceInstance d = *r.item;
  d.fields.set("spec.replicas", replicas);
  api_->write(kUser, cp::Op::update, d.key(), d.fields);
}

void Workload::touch(const std::string& kind, const std::string& name) {
  auto r = api_->get(kUser, {kind, model::kSystemNamespace, name});
  if (!r.ok || !r.item) return;
  model::ResourceInstance inst = *r.item;
  inst.fields.set("metadata.annotations.note", "touch-" + std::to_string(++touch_seq_));
  api_->write(kUser, cp::Op::update, inst.key(), inst.fields);
}

void Workload::add_node_taint(const std::string& node, const std::string& taint) {
  auto r = api_->get(kUser, {"Node", model::kSystemNamespace, node});
  if (!r.ok || !r.item) return;
  model::ResourceInstance n = *r.item;
  n.fields.add("spec.taints", taint);
  api_->write(kUser, cp::Op::update, n.key(), n.fields);
}

// List-then-delete of operator-owned kinds in the app namespace. Controller
// children (replica sets, pods, endpoints) are left to the garbage collector.
void Workload::cleanup() {
  for (const char* kind : {"Deployment", "Service"}) {
    auto r = api_->list(kUser, kind, kNs);
    for (const auto& item : r.items) {
      api_->remove(kUser, {std::string(kind), kNs, item.name()});
    }
  }
}

}  // namespace orchsim::run
