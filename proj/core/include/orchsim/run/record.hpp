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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/jsonx.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::run {

// Periodic cluster observation. Per-deployment readiness is keyed by the
// tier label, which names the owning deployment in this scenario.
struct MetricsSample {
  sim::SimTime t = 0;
  int pods_total = 0;
  int pods_ready = 0;
  std::map<std::string, int> ready_by_tier;
  int endpoint_addrs = 0;
  int endpoints_without_agent = 0;  // addresses whose node lacks a live network agent
  int dns_ready = 0;
  int netagent_nodes = 0;
  int nodes_ready = 0;
  std::int64_t creates_total = 0;
  std::int64_t applied_writes = 0;
  std::int64_t attempted_writes = 0;
  std::int64_t store_size = 0;

  Json to_json() const;
  static MetricsSample from_json(const Json& j);
};

// Everything the classifier needs from one run, and nothing that requires
// replaying the trace. Serialized as the experiment record file.
struct ExperimentRecord {
  std::string id;
  std::string workload;
  std::uint64_t seed = 0;
  Json config = Json::object();
  std::optional<Json> injection;
  std::optional<Json> injection_outcome;

  sim::SimTime t_end = 0;
  bool quiesced = false;
  bool livelock = false;
  sim::SimTime cleanup_at = 0;

  std::vector<MetricsSample> samples;
  std::vector<double> latencies;      // request latency series; failed requests stay 0
  std::vector<std::string> errors;    // per-request error kind, "" for success

  sim::SimTime worst_startup_ms = 0;  // slowest created-to-ready span, app namespace
  sim::SimTime last_creation_ms = 0;  // latest pod creation before cleanup, app namespace
  std::int64_t restarts_total = 0;
  std::int64_t evictions_total = 0;
  int scheduler_restarts = 0;
  std::int64_t creates_total = 0;     // pod creations, all namespaces
  std::int64_t creates_after_cleanup = 0;
  bool store_ever_stalled = false;
  std::int64_t store_final_size = 0;
  std::int64_t user_errors = 0;       // API errors returned to the workload operator

  Json traffic = Json::object();      // per-source request/error tallies
  std::vector<Json> events;           // trace event lines (non-message)
  std::string trace_digest;

  int error_count() const;
  Json to_json() const;
  static ExperimentRecord from_json(const Json& j);
};

}  // namespace orchsim::run
