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

#include "orchsim/classify/baseline.hpp"

#include <algorithm>

#include "orchsim/classify/stats.hpp"

namespace orchsim::classify {

std::vector<const run::MetricsSample*> Baseline::steady_window(const run::ExperimentRecord& r) {
  std::vector<const run::MetricsSample*> picked;
  for (const auto& s : r.samples) {
    if (s.t <= r.cleanup_at - 1000) picked.push_back(&s);
  }
  if (picked.size() > static_cast<std::size_t>(kSteadySamples)) {
    picked.erase(picked.begin(), picked.end() - kSteadySamples);
  }
  return picked;
}

Baseline Baseline::build(const std::string& workload,
                         const std::vector<run::ExperimentRecord>& records) {
  Baseline b;
  b.workload = workload;
  b.runs = static_cast<int>(records.size());
  if (records.empty()) return b;

  std::size_t series_len = 0;
  for (const auto& r : records) series_len = std::max(series_len, r.latencies.size());
  b.latency_mean.assign(series_len, 0.0);
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.latencies.size(); ++i) b.latency_mean[i] += r.latencies[i];
  }
  for (double& v : b.latency_mean) v /= static_cast<double>(records.size());

  std::vector<double> maes, wss, lcs;
  for (const auto& r : records) {
    maes.push_back(mae(r.latencies, b.latency_mean));
    wss.push_back(static_cast<double>(r.worst_startup_ms));
    lcs.push_back(static_cast<double>(r.last_creation_ms));
  }
  b.mae_mu = mean(maes);
  b.mae_sigma = stddev(maes);
  b.ws_mu = mean(wss);
  b.ws_sigma = stddev(wss);
  b.lc_mu = mean(lcs);
  b.lc_sigma = stddev(lcs);

  bool first = true;
  for (const auto& r : records) {
    b.max_creates = std::max(b.max_creates, r.creates_total);
    b.final_store_max = std::max(b.final_store_max, r.store_final_size);
    for (const run::MetricsSample* s : steady_window(r)) {
      if (first) {
        b.endpoints_min = b.endpoints_max = s->endpoint_addrs;
        b.pods_total_min = b.pods_total_max = s->pods_total;
        b.dns_min = s->dns_ready;
        b.netagent_min = s->netagent_nodes;
        b.nodes_min = s->nodes_ready;
        first = false;
      } else {
        b.endpoints_min = std::min(b.endpoints_min, s->endpoint_addrs);
        b.endpoints_max = std::max(b.endpoints_max, s->endpoint_addrs);
        b.pods_total_min = std::min(b.pods_total_min, s->pods_total);
        b.pods_total_max = std::max(b.pods_total_max, s->pods_total);
        b.dns_min = std::min(b.dns_min, s->dns_ready);
        b.netagent_min = std::min(b.netagent_min, s->netagent_nodes);
        b.nodes_min = std::min(b.nodes_min, s->nodes_ready);
      }
      for (const auto& [tier, ready] : s->ready_by_tier) {
        auto mn = b.tier_min.find(tier);
        if (mn == b.tier_min.end()) {
          b.tier_min[tier] = ready;
          b.tier_max[tier] = ready;
        } else {
          mn->second = std::min(mn->second, ready);
          b.tier_max[tier] = std::max(b.tier_max[tier], ready);
        }
      }
    }
  }
  return b;
}

Json Baseline::to_json() const {
  Json j;
  j["workload"] = workload;
  j["runs"] = runs;
  j["latency_mean"] = latency_mean;
  j["mae_mu"] = mae_mu;
  j["mae_sigma"] = mae_sigma;
  j["ws_mu"] = ws_mu;
  j["ws_sigma"] = ws_sigma;
  j["lc_mu"] = lc_mu;
  j["lc_sigma"] = lc_sigma;
  j["tier_min"] = tier_min;
  j["tier_max"] = tier_max;
  j["endpoints_min"] = endpoints_min;
  j["endpoints_max"] = endpoints_max;
  j["pods_total_min"] = pods_total_min;
  j["pods_total_max"] = pods_total_max;
  j["dns_min"] = dns_min;
  j["netagent_min"] = netagent_min;
  j["nodes_min"] = nodes_min;
  j["max_creates"] = max_creates;
  j["final_store_max"] = final_store_max;
  return j;
}

Baseline Baseline::from_json(const Json& j) {
  Baseline b;
  b.workload = j.value("workload", "");
  b.runs = j.value("runs", 0);
  b.latency_mean = j.value("latency_mean", std::vector<double>{});
  b.mae_mu = j.value("mae_mu", 0.0);
  b.mae_sigma = j.value("mae_sigma", 0.0);
  b.ws_mu = j.value("ws_mu", 0.0);
  b.ws_sigma = j.value("ws_sigma", 0.0);
  b.lc_mu = j.value("lc_mu", 0.0);
  b.lc_sigma = j.value("lc_sigma", 0.0);
  b.tier_min = j.value("tier_min", std::map<std::string, int>{});
  b.tier_max = j.value("tier_max", std::map<std::string, int>{});
  b.endpoints_min = j.value("endpoints_min", 0);
  b.endpoints_max = j.value("endpoints_max", 0);
  b.pods_total_min = j.value("pods_total_min", 0);
  b.pods_total_max = j.value("pods_total_max", 0);
  b.dns_min = j.value("dns_min", 0);
  b.netagent_min = j.value("netagent_min", 0);
  b.nodes_min = j.value("nodes_min", 0);
  b.max_creates = j.value("max_creates", std::int64_t{0});
  b.final_store_max = j.value("final_store_max", std::int64_t{0});
  return b;
}

}  // namespace orchsim::classify
