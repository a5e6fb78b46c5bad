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

#include <map>
#include <string>
#include <vector>

#include "orchsim/run/record.hpp"

namespace orchsim::classify {

// Reference behavior distilled from a fault-free suite of one workload.
// Envelope bounds come from each run's steady window: the last few samples
// before cleanup, once the scripted churn has settled.
struct Baseline {
  std::string workload;
  int runs = 0;

  std::vector<double> latency_mean;  // pointwise mean of the request series
  double mae_mu = 0, mae_sigma = 0;  // per-run deviation from latency_mean
  double ws_mu = 0, ws_sigma = 0;    // worst pod startup span
  double lc_mu = 0, lc_sigma = 0;    // last pod creation time

  std::map<std::string, int> tier_min, tier_max;  // steady ready per deployment
  int endpoints_min = 0, endpoints_max = 0;
  int pods_total_min = 0, pods_total_max = 0;
  int dns_min = 0;
  int netagent_min = 0;
  int nodes_min = 0;
  std::int64_t max_creates = 0;
  std::int64_t final_store_max = 0;

  static constexpr int kSteadySamples = 3;
  // Samples at least one full period before cleanup, newest kSteadySamples.
  static std::vector<const run::MetricsSample*> steady_window(const run::ExperimentRecord& r);

  static Baseline build(const std::string& workload,
                        const std::vector<run::ExperimentRecord>& runs);

  Json to_json() const;
  static Baseline from_json(const Json& j);
};

}  // namespace orchsim::classify
