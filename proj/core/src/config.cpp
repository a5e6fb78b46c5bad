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

#include "orchsim/run/config.hpp"

namespace orchsim::run {

namespace {

template <typename T>
void pick(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Json RunConfig::to_json() const {
  Json model;
  model["watch_latency_ms"] = watch_latency_ms;
  model["debounce_ms"] = debounce_ms;
  model["resync_ms"] = resync_ms;
  model["verify_requeue_ms"] = verify_requeue_ms;
  model["create_burst"] = create_burst;
  model["store_max_entries"] = store_max_entries;
  model["lease_ms"] = lease_ms;
  model["renew_ms"] = renew_ms;
  model["node_grace_ms"] = node_grace_ms;
  model["eviction_delay_ms"] = eviction_delay_ms;
  model["stale_pending_ms"] = stale_pending_ms;
  model["sweep_period_ms"] = sweep_period_ms;
  model["heartbeat_ms"] = heartbeat_ms;
  model["status_sync_ms"] = status_sync_ms;
  model["pod_grace_ms"] = pod_grace_ms;
  model["startup_base_ms"] = startup_base_ms;
  model["startup_jitter_ms"] = startup_jitter_ms;
  model["crash_backoff_base_ms"] = crash_backoff_base_ms;
  model["crash_backoff_factor"] = crash_backoff_factor;
  model["crash_backoff_cap_ms"] = crash_backoff_cap_ms;
  model["node_capacity_cpu"] = node_capacity_cpu;
  model["node_capacity_mem"] = node_capacity_mem;
  model["client_interval_ms"] = client_interval_ms;
  model["client_duration_ms"] = client_duration_ms;
  model["client_timeout_ms"] = client_timeout_ms;
  model["service_time_ms"] = service_time_ms;
  model["agent_priority"] = agent_priority;
  model["app_priority"] = app_priority;
  model["traffic_start_ms"] = traffic_start_ms;
  model["cleanup_after_ms"] = cleanup_after_ms;

  Json harness;
  harness["seed"] = seed;
  harness["metrics_period_ms"] = metrics_period_ms;
  harness["quiescence_ms"] = quiescence_ms;
  harness["t_max_ms"] = t_max_ms;
  harness["monitored_ns"] = monitored_ns;
  harness["mute_heartbeats"] = mute_heartbeats;

  return Json{{"model", model}, {"harness", harness}};
}

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  const Json model = j.value("model", Json::object());
  pick(model, "watch_latency_ms", c.watch_latency_ms);
  pick(model, "debounce_ms", c.debounce_ms);
  pick(model, "resync_ms", c.resync_ms);
  pick(model, "verify_requeue_ms", c.verify_requeue_ms);
  pick(model, "create_burst", c.create_burst);
  pick(model, "store_max_entries", c.store_max_entries);
  pick(model, "lease_ms", c.lease_ms);
  pick(model, "renew_ms", c.renew_ms);
  pick(model, "node_grace_ms", c.node_grace_ms);
  pick(model, "eviction_delay_ms", c.eviction_delay_ms);
  pick(model, "stale_pending_ms", c.stale_pending_ms);
  pick(model, "sweep_period_ms", c.sweep_period_ms);
  pick(model, "heartbeat_ms", c.heartbeat_ms);
  pick(model, "status_sync_ms", c.status_sync_ms);
  pick(model, "pod_grace_ms", c.pod_grace_ms);
  pick(model, "startup_base_ms", c.startup_base_ms);
  pick(model, "startup_jitter_ms", c.startup_jitter_ms);
  pick(model, "crash_backoff_base_ms", c.crash_backoff_base_ms);
  pick(model, "crash_backoff_factor", c.crash_backoff_factor);
  pick(model, "crash_backoff_cap_ms", c.crash_backoff_cap_ms);
  pick(model, "node_capacity_cpu", c.node_capacity_cpu);
  pick(model, "node_capacity_mem", c.node_capacity_mem);
  pick(model, "client_interval_ms", c.client_interval_ms);
  pick(model, "client_duration_ms", c.client_duration_ms);
  pick(model, "client_timeout_ms", c.client_timeout_ms);
  pick(model, "service_time_ms", c.service_time_ms);
  pick(model, "agent_priority", c.agent_priority);
  pick(model, "app_priority", c.app_priority);
  pick(model, "traffic_start_ms", c.traffic_start_ms);
  pick(model, "cleanup_after_ms", c.cleanup_after_ms);

  const Json harness = j.value("harness", Json::object());
  pick(harness, "seed", c.seed);
  pick(harness, "metrics_period_ms", c.metrics_period_ms);
  pick(harness, "quiescence_ms", c.quiescence_ms);
  pick(harness, "t_max_ms", c.t_max_ms);
  pick(harness, "monitored_ns", c.monitored_ns);
  pick(harness, "mute_heartbeats", c.mute_heartbeats);
  return c;
}

}  // namespace orchsim::run
