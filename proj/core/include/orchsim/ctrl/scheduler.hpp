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

#include "orchsim/cp/apiserver.hpp"
#include "orchsim/ctrl/cache.hpp"
#include "orchsim/ctrl/leader.hpp"
#include "orchsim/run/config.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::ctrl {

// Binds pending pods to nodes. Spreads by most free CPU, preempts lower
// priority pods when a high priority pod cannot fit, and treats a watch
// event about a pod bound to a node it has never heard of as cache
// corruption: the process restarts and a successor takes over once the old
// leader lease has expired.
class Scheduler {
 public:
  Scheduler(sim::Kernel* kernel, sim::Trace* trace, cp::ApiServer* api,
            const run::RunConfig* cfg);

  void start();

  bool is_leader() const { return elected_; }
  std::int64_t binds() const { return binds_; }
  int restarts() const { return restarts_; }
  const LeaderLease& lease() const { return lease_; }

 private:
  void on_event(const cp::WatchEvent& ev);
  void acquire_loop();
  void restart(const model::ResourceKey& pod, const std::string& node);
  void resync();
  void periodic_resync();
  void request_pass(sim::SimTime delay);
  void pass();

  std::int64_t free_cpu(const model::ResourceInstance& node) const;
  std::int64_t free_mem(const model::ResourceInstance& node) const;
  bool node_eligible(const model::ResourceInstance& node,
                     const model::ResourceInstance& pod) const;
  bool bind(const model::ResourceInstance& pod, const std::string& node);

  sim::Kernel* kernel_;
  sim::Trace* trace_;
  cp::ApiServer* api_;
  const run::RunConfig* cfg_;

  ObjectCache cache_;
  LeaderLease lease_;
  int instance_ = 1;
  bool elected_ = false;
  bool pass_pending_ = false;
  sim::SimTime next_pass_at_ = 0;

  std::int64_t binds_ = 0;
  int restarts_ = 0;
  // Capacity claimed by bindings made this pass, not yet visible in cache.
  std::map<std::string, std::int64_t> reserved_cpu_;
  std::map<std::string, std::int64_t> reserved_mem_;
};

}  // namespace orchsim::ctrl
