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

#include "orchsim/classify/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "orchsim/classify/stats.hpp"

namespace orchsim::classify {

namespace {

const char* kOfNames[] = {"No", "Tim", "LeR", "MoR", "Net", "Sta", "Out"};
const char* kCfNames[] = {"NSI", "HRT", "IA", "SU"};

double clamp_z(double z) {
  if (std::isinf(z)) return z > 0 ? 1e9 : -1e9;
  return z;
}

}  // namespace

int of_rank(OF c) { return static_cast<int>(c); }
const char* of_name(OF c) { return kOfNames[static_cast<int>(c)]; }
OF of_from_name(const std::string& name) {
  for (int i = 0; i < 7; ++i) {
    if (name == kOfNames[i]) return static_cast<OF>(i);
  }
  return OF::No;
}

int cf_rank(CF c) { return static_cast<int>(c); }
const char* cf_name(CF c) { return kCfNames[static_cast<int>(c)]; }
CF cf_from_name(const std::string& name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kCfNames[i]) return static_cast<CF>(i);
  }
  return CF::NSI;
}

Json Evidence::to_json() const {
  return Json{{"class", cls}, {"code", code}, {"detail", detail}};
}

bool Classification::has_evidence(const std::string& code) const {
  for (const auto& e : of_evidence)
    if (e.code == code) return true;
  for (const auto& e : cf_evidence)
    if (e.code == code) return true;
  return false;
}

Json Classification::to_json() const {
  Json j;
  j["of"] = of_name(of);
  j["cf"] = cf_name(cf);
  Json ofe = Json::array(), cfe = Json::array();
  for (const auto& e : of_evidence) ofe.push_back(e.to_json());
  for (const auto& e : cf_evidence) cfe.push_back(e.to_json());
  j["of_evidence"] = ofe;
  j["cf_evidence"] = cfe;
  j["mae"] = mae;
  j["z_mae"] = clamp_z(z_mae);
  j["z_worst_startup"] = clamp_z(z_worst_startup);
  j["z_last_creation"] = clamp_z(z_last_creation);
  return j;
}

Classification classify(const run::ExperimentRecord& r, const Baseline& b) {
  Classification c;
  c.mae = mae(r.latencies, b.latency_mean);
  c.z_mae = z_score(c.mae, b.mae_mu, b.mae_sigma);
  c.z_worst_startup =
      z_score(static_cast<double>(r.worst_startup_ms), b.ws_mu, b.ws_sigma);
  c.z_last_creation =
      z_score(static_cast<double>(r.last_creation_ms), b.lc_mu, b.lc_sigma);

  int total_errors = 0, non_timeout_errors = 0;
  for (const auto& e : r.errors) {
    if (e.empty()) continue;
    ++total_errors;
    if (e != "timeout") ++non_timeout_errors;
  }

  auto add = [&](OF cls, std::string code, Json detail) {
    c.of_evidence.push_back(Evidence{of_name(cls), std::move(code), std::move(detail)});
    if (of_rank(cls) > of_rank(c.of)) c.of = cls;
  };

  // Timing deviations.
  if (r.restarts_total > 0) {
    add(OF::Tim, "pod_restarts", Json{{"restarts", r.restarts_total}});
  }
  if (c.z_worst_startup > kZForTim) {
    add(OF::Tim, "slow_startup",
        Json{{"worst_startup_ms", r.worst_startup_ms}, {"z", clamp_z(c.z_worst_startup)}});
  }
  if (c.z_last_creation > kZForTim) {
    add(OF::Tim, "late_creation",
        Json{{"last_creation_ms", r.last_creation_ms}, {"z", clamp_z(c.z_last_creation)}});
  }

  // Steady-state rules read the last samples before cleanup. Replica-count
  // rules ask for a value that is both stable (unchanged across the whole
  // window) and outside the envelope; a count still in flux is transient,
  // not a settled deviation.
  const auto steady = Baseline::steady_window(r);
  const bool full_window = static_cast<int>(steady.size()) == Baseline::kSteadySamples;
  if (!steady.empty()) {
    auto tier_values = [&](const std::string& tier) {
      std::vector<int> vs;
      for (const auto* s : steady) {
        auto it = s->ready_by_tier.find(tier);
        vs.push_back(it == s->ready_by_tier.end() ? 0 : it->second);
      }
      return vs;
    };
    auto stable = [](const std::vector<int>& vs) -> std::optional<int> {
      for (int v : vs)
        if (v != vs.front()) return std::nullopt;
      return vs.front();
    };

    bool tiers_correct = true;
    int ready_sum_max = 0;
    for (const auto& [tier, base_min] : b.tier_min) {
      const std::vector<int> vs = tier_values(tier);
      const int base_max = b.tier_max.at(tier);
      for (int v : vs) {
        ready_sum_max = std::max(ready_sum_max, v);
        if (v < base_min || v > base_max) tiers_correct = false;
      }
      if (!full_window) continue;
      if (auto v = stable(vs)) {
        if (*v < base_min) {
          add(OF::LeR, "fewer_ready",
              Json{{"tier", tier}, {"steady", *v}, {"baseline_min", base_min}});
        } else if (*v > base_max) {
          add(OF::MoR, "more_ready",
              Json{{"tier", tier}, {"steady", *v}, {"baseline_max", base_max}});
        }
      }
    }
    if (full_window) {
      std::vector<int> totals;
      for (const auto* s : steady) totals.push_back(s->pods_total);
      if (auto v = stable(totals); v && *v > b.pods_total_max) {
        add(OF::MoR, "extra_pods", Json{{"steady", *v}, {"baseline_max", b.pods_total_max}});
      }
    }

    // Traffic plumbing: the pods themselves look right, yet some are left
    // out of load balancing or sit behind a dead network agent.
    if (tiers_correct && full_window) {
      bool endpoints_short = true;
      int uncovered = 0;
      for (const auto* s : steady) {
        if (s->endpoint_addrs >= s->pods_ready) endpoints_short = false;
        uncovered = std::max(uncovered, s->endpoints_without_agent);
      }
      if (endpoints_short) {
        add(OF::Net, "endpoints_missing",
            Json{{"endpoint_addrs", steady.back()->endpoint_addrs},
                 {"pods_ready", steady.back()->pods_ready}});
      }
      if (uncovered > 0) {
        add(OF::Net, "endpoint_no_agent", Json{{"addresses", uncovered}});
      }
    }

    // Agent and service health. A network agent deficit alone costs
    // stability; with client-visible damage it is an outage.
    {
      int net_hi = 0, dns_hi = 0;
      for (const auto* s : steady) {
        net_hi = std::max(net_hi, s->netagent_nodes);
        dns_hi = std::max(dns_hi, s->dns_ready);
      }
      if (net_hi < b.netagent_min) {
        add(OF::Sta, "networking_pods_fail",
            Json{{"netagent_nodes", net_hi}, {"baseline_min", b.netagent_min}});
        if (total_errors > 0) {
          add(OF::Out, "network_disruption",
              Json{{"netagent_nodes", net_hi}, {"client_errors", total_errors}});
        }
      }
      if (dns_hi == 0 && b.dns_min > 0) {
        add(OF::Out, "dns_down", Json{{"dns_ready", 0}});
      }
    }
    if (!b.tier_min.empty() && ready_sum_max == 0) {
      add(OF::Out, "service_unreachable", Json{{"ready_sum", 0}});
    }
  }

  // Stability loss.
  const std::int64_t spawn_limit = 2 * b.max_creates + 20;
  if (r.creates_total > spawn_limit) {
    add(OF::Sta, "uncontrolled_spawn",
        Json{{"creates_total", r.creates_total}, {"limit", spawn_limit}});
  }
  if (r.store_ever_stalled) {
    add(OF::Sta, "store_stalled", Json{{"final_size", r.store_final_size}});
  }
  if (r.livelock) {
    add(OF::Sta, "runaway_reactions", Json{{"t", r.t_end}});
  }
  if (r.creates_after_cleanup > kSpawnLoopCreates) {
    add(OF::Sta, "terminating_spawn_loop",
        Json{{"creates_after_cleanup", r.creates_after_cleanup},
             {"store_residue", r.store_final_size},
             {"baseline_store_max", b.final_store_max}});
  }
  // Stuck control plane: writes keep being attempted while nothing lands.
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    std::size_t j = i;
    while (j + 1 < r.samples.size() &&
           r.samples[j + 1].applied_writes == r.samples[i].applied_writes) {
      ++j;
    }
    if (r.samples[j].t - r.samples[i].t >= kStuckWindowMs &&
        r.samples[j].attempted_writes > r.samples[i].attempted_writes) {
      add(OF::Sta, "control_plane_stuck",
          Json{{"from", r.samples[i].t},
               {"to", r.samples[j].t},
               {"attempted_delta",
                r.samples[j].attempted_writes - r.samples[i].attempted_writes}});
      break;
    }
    i = j;
  }

  // Client-side label: first matching rule wins.
  if (!r.errors.empty() && !r.errors.back().empty()) {
    int trailing = 0;
    for (auto it = r.errors.rbegin(); it != r.errors.rend() && !it->empty(); ++it) ++trailing;
    c.cf = CF::SU;
    c.cf_evidence.push_back(
        Evidence{cf_name(CF::SU), "trailing_errors", Json{{"trailing", trailing}}});
  } else if (non_timeout_errors > 0) {
    c.cf = CF::IA;
    c.cf_evidence.push_back(Evidence{cf_name(CF::IA), "intermittent_errors",
                                     Json{{"non_timeout_errors", non_timeout_errors}}});
  } else if (c.z_mae > kZMaeForHRT) {
    c.cf = CF::HRT;
    c.cf_evidence.push_back(Evidence{cf_name(CF::HRT), "latency_deviation",
                                     Json{{"mae", c.mae}, {"z", clamp_z(c.z_mae)}}});
  }
  return c;
}

}  // namespace orchsim::classify
