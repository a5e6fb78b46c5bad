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

#include <cstdint>
#include <string>
#include <vector>

#include "orchsim/jsonx.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::run {

// Every knob of a single run. Two groups: `model` constants shape the
// simulated cluster's behaviour and are meant to stay fixed across a study;
// `harness` constants control the run around it. Serialized with the same
// split so a config file documents which is which.
struct RunConfig {
  std::uint64_t seed = 1;

  // model: control plane
  sim::SimTime watch_latency_ms = 1;
  sim::SimTime debounce_ms = 100;
  sim::SimTime resync_ms = 10000;
  sim::SimTime verify_requeue_ms = 1000;
  int create_burst = 500;
  std::size_t store_max_entries = 20000;
  sim::SimTime lease_ms = 20000;
  sim::SimTime renew_ms = 1000;
  sim::SimTime node_grace_ms = 40000;
  sim::SimTime eviction_delay_ms = 5000;
  sim::SimTime stale_pending_ms = 50000;
  sim::SimTime sweep_period_ms = 5000;

  // model: nodes
  sim::SimTime heartbeat_ms = 10000;
  sim::SimTime status_sync_ms = 10000;
  sim::SimTime pod_grace_ms = 2000;
  sim::SimTime startup_base_ms = 1500;
  sim::SimTime startup_jitter_ms = 300;
  sim::SimTime crash_backoff_base_ms = 10000;
  int crash_backoff_factor = 2;
  sim::SimTime crash_backoff_cap_ms = 300000;
  std::int64_t node_capacity_cpu = 8000;
  std::int64_t node_capacity_mem = 4096;

  // model: client
  sim::SimTime client_interval_ms = 50;
  sim::SimTime client_duration_ms = 30000;
  sim::SimTime client_timeout_ms = 2000;
  sim::SimTime service_time_ms = 25;

  // model: scenario
  std::int64_t agent_priority = 2000;
  std::int64_t app_priority = 0;
  sim::SimTime traffic_start_ms = 20000;
  sim::SimTime cleanup_after_ms = 60000;

  // harness
  sim::SimTime metrics_period_ms = 3000;
  sim::SimTime quiescence_ms = 15000;
  sim::SimTime t_max_ms = 180000;
  std::string monitored_ns = "default";
  // Nodes whose heartbeat is suppressed for the whole run; "*" mutes all.
  std::vector<std::string> mute_heartbeats;

  Json to_json() const;
  static RunConfig from_json(const Json& j);
};

}  // namespace orchsim::run
