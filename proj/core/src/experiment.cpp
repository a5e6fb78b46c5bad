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

#include "orchsim/run/experiment.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "orchsim/app/client.hpp"
#include "orchsim/cp/apiserver.hpp"
#include "orchsim/ctrl/controller_manager.hpp"
#include "orchsim/ctrl/scheduler.hpp"
#include "orchsim/inject/injector.hpp"
#include "orchsim/node/node_agent.hpp"
#include "orchsim/run/workload.hpp"
#include "orchsim/wire/schema.hpp"

namespace orchsim::run {

namespace {

// Passive observer. The watch subscription tracks pod lifecycle spans; the
// periodic sample reads cluster state through the same read path every other
// component uses.
class Monitor {
 public:
  Monitor(sim::Kernel* kernel, cp::ApiServer* api, ctrl::ControllerManager* kcm,
          const RunConfig* cfg, sim::SimTime cleanup_at)
      : kernel_(kernel), api_(api), kcm_(kcm), cfg_(cfg), cleanup_at_(cleanup_at) {}

  void attach() {
    api_->subscribe("monitor", {"Pod"}, [this](const cp::WatchEvent& ev) { on_pod(ev); });
    kernel_->schedule(cfg_->metrics_period_ms, "monitor", [this] { tick(); });
  }

  std::vector<MetricsSample> take_samples() { return std::move(samples_); }
  std::int64_t creates_total() const { return creates_total_; }
  std::int64_t creates_after_cleanup() const { return creates_after_cleanup_; }
  std::int64_t restarts_total() const {
    std::int64_t sum = 0;
    for (const auto& [key, n] : restarts_) sum += n;
    return sum;
  }
  sim::SimTime worst_startup() const { return worst_startup_; }
  sim::SimTime last_creation() const { return last_creation_; }

 private:
  struct PodSpan {
    sim::SimTime created = 0;
    sim::SimTime first_ready = -1;
  };

  void on_pod(const cp::WatchEvent& ev) {
    const sim::SimTime now = kernel_->now();
    if (ev.type == cp::WatchEvent::Type::added) {
      ++creates_total_;
      if (now > cleanup_at_) ++creates_after_cleanup_;
      if (ev.key.ns == cfg_->monitored_ns) {
        // Names get reused after churn; each Added starts a fresh span.
        pods_[ev.key] = PodSpan{now, -1};
        if (now <= cleanup_at_) last_creation_ = std::max(last_creation_, now);
      }
    }
    if (!ev.instance || ev.key.ns != cfg_->monitored_ns) return;
    auto it = pods_.find(ev.key);
    if (it == pods_.end()) return;
    if (it->second.first_ready < 0 && ev.instance->phase() == "Running" && ev.instance->ready()) {
      it->second.first_ready = now;
      worst_startup_ = std::max(worst_startup_, now - it->second.created);
    }
    std::int64_t rc = ev.instance->fields.int_or("status.restart_count", 0);
    auto& seen = restarts_[ev.key];
    seen = std::max(seen, rc);
  }

  void tick() {
    samples_.push_back(sample());
    kernel_->schedule(cfg_->metrics_period_ms, "monitor", [this] { tick(); });
  }

  MetricsSample sample() {
    MetricsSample s;
    s.t = kernel_->now();

    std::map<std::string, std::string> ip_node;
    auto pods = api_->list("monitor", "Pod", cfg_->monitored_ns);
    for (const auto& p : pods.items) {
      ++s.pods_total;
      const bool up = p.phase() == "Running" && p.ready();
      if (up) ++s.pods_ready;
      auto labels = p.labels();
      auto tier = labels.find("tier");
      if (tier != labels.end()) {
        if (up) ++s.ready_by_tier[tier->second];
        else s.ready_by_tier.try_emplace(tier->second, 0);
      }
      std::string ip = p.fields.str_or("status.pod_ip", "");
      if (!ip.empty()) ip_node[ip] = p.node_name();
    }

    std::vector<std::string> addrs;
    auto ep = api_->get("monitor", {"Endpoints", cfg_->monitored_ns, "web"});
    if (ep.ok && ep.item) {
      addrs = ep.item->string_list("subsets.addresses");
      s.endpoint_addrs = static_cast<int>(addrs.size());
    }

    std::set<std::string> agent_nodes;
    auto system_pods = api_->list("monitor", "Pod", model::kSystemNamespace);
    for (const auto& p : system_pods.items) {
      auto labels = p.labels();
      auto app = labels.find("app");
      if (app == labels.end()) continue;
      const bool up = p.phase() == "Running" && p.ready();
      if (!up) continue;
      if (app->second == "coredns") ++s.dns_ready;
      if (app->second == "netagent" && !p.node_name().empty()) agent_nodes.insert(p.node_name());
    }
    s.netagent_nodes = static_cast<int>(agent_nodes.size());
    for (const auto& a : addrs) {
      auto it = ip_node.find(a);
      if (it != ip_node.end() && !agent_nodes.count(it->second)) ++s.endpoints_without_agent;
    }

    auto nodes = api_->list("monitor", "Node", model::kSystemNamespace);
    for (const auto& n : nodes.items) {
      if (n.fields.bool_or("status.ready", false)) ++s.nodes_ready;
    }

    s.creates_total = creates_total_;
    s.applied_writes = api_->applied_writes();
    s.attempted_writes = kcm_->attempted_writes();
    s.store_size = static_cast<std::int64_t>(api_->store().size());
    return s;
  }

  sim::Kernel* kernel_;
  cp::ApiServer* api_;
  ctrl::ControllerManager* kcm_;
  const RunConfig* cfg_;
  sim::SimTime cleanup_at_;
  std::vector<MetricsSample> samples_;
  std::map<model::ResourceKey, PodSpan> pods_;
  std::map<model::ResourceKey, std::int64_t> restarts_;
  std::int64_t creates_total_ = 0;
  std::int64_t creates_after_cleanup_ = 0;
  sim::SimTime last_creation_ = 0;
  sim::SimTime worst_startup_ = 0;
};

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  const RunConfig& cfg = spec.config;
  ExperimentOutput out;

  sim::Kernel kernel(cfg.seed);
  const wire::SchemaSet& schema = wire::SchemaSet::embedded();
  cp::ApiServer api(&kernel, &kernel.trace(), &schema);
  api.store().set_max_entries(cfg.store_max_entries);

  ctrl::ControllerManager kcm(&kernel, &kernel.trace(), &api, &cfg);
  ctrl::Scheduler sched(&kernel, &kernel.trace(), &api, &cfg);
  std::vector<std::unique_ptr<node::NodeAgent>> kubelets;
  for (int i = 1; i <= 4; ++i) {
    kubelets.push_back(std::make_unique<node::NodeAgent>(
        &kernel, &kernel.trace(), &api, &cfg, "w" + std::to_string(i), i, cfg.seed));
  }

  Workload workload(&kernel, &api, &cfg, cfg.seed, spec.workload);
  app::ClientProbe client(&kernel, &api, &cfg, cfg.seed, cfg.traffic_start_ms,
                          cfg.monitored_ns, "web");

  std::unique_ptr<inject::Injector> injector;
  if (spec.injection) {
    injector = std::make_unique<inject::Injector>(&schema, *spec.injection);
    try {
      injector->arm();
    } catch (const inject::ConfigError& e) {
      out.config_error = true;
      out.config_error_detail = e.what();
      out.record.id = spec.id;
      out.record.workload = spec.workload;
      out.record.seed = cfg.seed;
      out.record.injection = spec.injection->to_json();
      return out;
    }
  }

  kcm.start();
  sched.start();
  for (auto& k : kubelets) k->start();
  workload.start();
  client.start();

  Monitor monitor(&kernel, &api, &kcm, &cfg, workload.cleanup_at());
  monitor.attach();

  if (injector) {
    // The fault is armed once scripted traffic opens; occurrence counting
    // starts here, not at cluster boot.
    kernel.schedule_at(cfg.traffic_start_ms, "injector",
                       [&] { api.set_injector(injector.get()); });
  }

  bool quiesced = false;
  bool livelock = false;
  try {
    sim::SimTime t = 0;
    while (t < cfg.t_max_ms) {
      t = std::min<sim::SimTime>(t + 1000, cfg.t_max_ms);
      kernel.run_until(t);
      if (workload.done() && client.done() &&
          t >= workload.cleanup_at() + cfg.quiescence_ms &&
          t - api.last_applied_write() >= cfg.quiescence_ms) {
        quiesced = true;
        break;
      }
    }
  } catch (const sim::LivelockError&) {
    livelock = true;
  }

  ExperimentRecord& r = out.record;
  r.id = spec.id;
  r.workload = spec.workload;
  r.seed = cfg.seed;
  r.config = cfg.to_json();
  if (spec.injection) r.injection = spec.injection->to_json();
  if (injector) r.injection_outcome = injector->outcome().to_json();
  r.t_end = kernel.now();
  r.quiesced = quiesced;
  r.livelock = livelock;
  r.cleanup_at = workload.cleanup_at();
  r.samples = monitor.take_samples();
  for (const auto& rr : client.results()) {
    r.latencies.push_back(rr.latency_ms);
    r.errors.push_back(rr.error);
  }
  // A run aborted mid-probe (livelock) never answered the remaining
  // requests; they count as failures so the latency series keeps its
  // fixed length.
  while (static_cast<int>(r.latencies.size()) < client.planned_requests()) {
    r.latencies.push_back(0.0);
    r.errors.push_back("aborted");
  }
  r.worst_startup_ms = monitor.worst_startup();
  r.last_creation_ms = monitor.last_creation();
  r.restarts_total = monitor.restarts_total();
  r.evictions_total = kcm.evictions();
  r.scheduler_restarts = sched.restarts();
  r.creates_total = monitor.creates_total();
  r.creates_after_cleanup = monitor.creates_after_cleanup();
  r.store_ever_stalled = api.store().ever_stalled();
  r.store_final_size = static_cast<std::int64_t>(api.store().size());
  r.user_errors = api.errors_from(Workload::kUser);
  r.traffic = api.traffic_summary();
  for (const auto& line : kernel.trace().lines()) {
    if (line.contains("event")) r.events.push_back(line);
  }
  r.trace_digest = kernel.trace().digest();
  out.trace_text = kernel.trace().render();
  return out;
}

}  // namespace orchsim::run
