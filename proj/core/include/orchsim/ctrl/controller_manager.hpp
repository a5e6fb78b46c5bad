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
#include <set>
#include <string>
#include <vector>

#include "orchsim/cp/apiserver.hpp"
#include "orchsim/ctrl/cache.hpp"
#include "orchsim/ctrl/leader.hpp"
#include "orchsim/run/config.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::ctrl {

// The controller manager: one process hosting every reconciling controller
// except the scheduler. Each pass sweeps the full cached state and issues
// whatever writes close the gap to the desired state; passes are debounced
// behind watch events and repeated on a fixed resync period, so a missed or
// corrupted message is healed by a later look at the same state.
class ControllerManager {
 public:
  ControllerManager(sim::Kernel* kernel, sim::Trace* trace, cp::ApiServer* api,
                    const run::RunConfig* cfg);

  void start();

  bool is_leader() const;
  std::int64_t attempted_writes() const { return attempted_writes_; }
  std::int64_t reconcile_passes() const { return passes_; }
  std::int64_t evictions() const { return evictions_; }
  const LeaderLease& lease() const { return lease_; }

  // Namespaces this cluster considers its own; pods elsewhere are reaped.
  static const std::set<std::string>& known_namespaces();
  // Tolerations stamped onto node-agent daemon pods so they run everywhere.
  static const std::vector<std::string>& agent_tolerations();

 private:
  void on_event(const cp::WatchEvent& ev);
  void request_pass(sim::SimTime delay);
  void pass();
  void resync();
  void periodic_sweep();
  void acquire_loop();

  // Sweep families, in the order they run within a pass.
  void reconcile_system_daemons();
  void reconcile_deployments();
  void reconcile_replicasets();
  void reconcile_daemonsets();
  void reconcile_endpoints();
  void reconcile_taint_evictions();
  void reconcile_janitor();
  void reconcile_gc();

  // Timer-driven: node health transitions, heartbeat evictions with the
  // full-disruption guard, and the stuck-pending reaper.
  void node_lifecycle();
  void stale_pending_sweep();

  bool budget_ok() const { return writes_this_pass_ < cfg_->create_burst; }
  bool do_write(cp::Op op, const model::ResourceKey& key, const wire::FieldMap& fields);
  bool do_delete(const model::ResourceKey& key);
  std::string free_pod_name(const std::string& ns, const std::string& base) const;

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

  std::int64_t passes_ = 0;
  std::int64_t attempted_writes_ = 0;
  std::int64_t evictions_ = 0;
  int writes_this_pass_ = 0;

  // System-daemon controller bookkeeping: config versions already applied.
  std::map<model::ResourceKey, std::int64_t> applied_config_rv_;
  // Node health bookkeeping for eviction pacing.
  std::map<std::string, sim::SimTime> not_ready_since_;
  bool full_disruption_ = false;
  // Names created in the current pass, so one pass never reuses a name.
  std::set<model::ResourceKey> created_this_pass_;
  // Daemon-set creation backpressure, keyed by "<ds>@<node>".
  std::map<std::string, sim::SimTime> ds_created_at_;
};

}  // namespace orchsim::ctrl
