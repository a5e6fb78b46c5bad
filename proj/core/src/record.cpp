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

#include "orchsim/run/record.hpp"

#include <algorithm>

namespace orchsim::run {

Json MetricsSample::to_json() const {
  Json j;
  j["t"] = t;
  j["pods_total"] = pods_total;
  j["pods_ready"] = pods_ready;
  j["ready_by_tier"] = ready_by_tier;
  j["endpoint_addrs"] = endpoint_addrs;
  j["endpoints_without_agent"] = endpoints_without_agent;
  j["dns_ready"] = dns_ready;
  j["netagent_nodes"] = netagent_nodes;
  j["nodes_ready"] = nodes_ready;
  j["creates_total"] = creates_total;
  j["applied_writes"] = applied_writes;
  j["attempted_writes"] = attempted_writes;
  j["store_size"] = store_size;
  return j;
}

MetricsSample MetricsSample::from_json(const Json& j) {
  MetricsSample s;
  s.t = j.value("t", 0);
  s.pods_total = j.value("pods_total", 0);
  s.pods_ready = j.value("pods_ready", 0);
  s.ready_by_tier = j.value("ready_by_tier", std::map<std::string, int>{});
  s.endpoint_addrs = j.value("endpoint_addrs", 0);
  s.endpoints_without_agent = j.value("endpoints_without_agent", 0);
  s.dns_ready = j.value("dns_ready", 0);
  s.netagent_nodes = j.value("netagent_nodes", 0);
  s.nodes_ready = j.value("nodes_ready", 0);
  s.creates_total = j.value("creates_total", 0);
  s.applied_writes = j.value("applied_writes", 0);
  s.attempted_writes = j.value("attempted_writes", 0);
  s.store_size = j.value("store_size", 0);
  return s;
}

int ExperimentRecord::error_count() const {
  return static_cast<int>(
      std::count_if(errors.begin(), errors.end(), [](const std::string& e) { return !e.empty(); }));
}

Json ExperimentRecord::to_json() const {
  Json j;
  j["id"] = id;
  j["workload"] = workload;
  j["seed"] = seed;
  j["config"] = config;
  if (injection) j["injection"] = *injection;
  if (injection_outcome) j["injection_outcome"] = *injection_outcome;
  j["t_end"] = t_end;
  j["quiesced"] = quiesced;
  j["livelock"] = livelock;
  j["cleanup_at"] = cleanup_at;
  Json samples_j = Json::array();
  for (const auto& s : samples) samples_j.push_back(s.to_json());
  j["samples"] = samples_j;
  j["latencies"] = latencies;
  j["errors"] = errors;
  j["worst_startup_ms"] = worst_startup_ms;
  j["last_creation_ms"] = last_creation_ms;
  j["restarts_total"] = restarts_total;
  j["evictions_total"] = evictions_total;
  j["scheduler_restarts"] = scheduler_restarts;
  j["creates_total"] = creates_total;
  j["creates_after_cleanup"] = creates_after_cleanup;
  j["store_ever_stalled"] = store_ever_stalled;
  j["store_final_size"] = store_final_size;
  j["user_errors"] = user_errors;
  j["traffic"] = traffic;
  j["events"] = events;
  j["trace_digest"] = trace_digest;
  return j;
}

ExperimentRecord ExperimentRecord::from_json(const Json& j) {
  ExperimentRecord r;
  r.id = j.value("id", "");
  r.workload = j.value("workload", "");
  r.seed = j.value("seed", std::uint64_t{0});
  r.config = j.value("config", Json::object());
  if (j.contains("injection")) r.injection = j.at("injection");
  if (j.contains("injection_outcome")) r.injection_outcome = j.at("injection_outcome");
  r.t_end = j.value("t_end", 0);
  r.quiesced = j.value("quiesced", false);
  r.livelock = j.value("livelock", false);
  r.cleanup_at = j.value("cleanup_at", 0);
  for (const auto& s : j.value("samples", Json::array())) {
    r.samples.push_back(MetricsSample::from_json(s));
  }
  r.latencies = j.value("latencies", std::vector<double>{});
  r.errors = j.value("errors", std::vector<std::string>{});
  r.worst_startup_ms = j.value("worst_startup_ms", 0);
  r.last_creation_ms = j.value("last_creation_ms", 0);
  r.restarts_total = j.value("restarts_total", 0);
  r.evictions_total = j.value("evictions_total", 0);
  r.scheduler_restarts = j.value("scheduler_restarts", 0);
  r.creates_total = j.value("creates_total", 0);
  r.creates_after_cleanup = j.value("creates_after_cleanup", 0);
  r.store_ever_stalled = j.value("store_ever_stalled", false);
  r.store_final_size = j.value("store_final_size", 0);
  r.user_errors = j.value("user_errors", 0);
  r.traffic = j.value("traffic", Json::object());
  for (const auto& e : j.value("events", Json::array())) r.events.push_back(e);
  r.trace_digest = j.value("trace_digest", "");
  return r;
}

}  // namespace orchsim::run
