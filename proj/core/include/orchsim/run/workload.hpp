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

#include <functional>
#include <string>
#include <vector>

#include "orchsim/cp/apiserver.hpp"
#include "orchsim/rng.hpp"
#include "orchsim/run/config.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::run {

// Scripted operator behavior. Every run shares the same cluster setup (four
// nodes, agent configs, the web service and two standing deployments) and the
// same end-of-run cleanup; the named workload decides what the operator does
// in between. Operation times carry a small uniform jitter so a golden suite
// explores interleavings instead of replaying one schedule.
class Workload {
 public:
  Workload(sim::Kernel* kernel, cp::ApiServer* api, const RunConfig* cfg, std::uint64_t seed,
           std::string name);

  void start();
  bool done() const { return done_ >= total_; }
  sim::SimTime cleanup_at() const { return cleanup_at_; }

  static const std::vector<std::string>& names();
  static bool known(const std::string& name);

  // Source tag for every API request the scripted operator makes.
  static constexpr const char* kUser = "user";

 private:
  void act(sim::SimTime at, std::function<void()> fn);
  void create_node(const std::string& name, const std::vector<std::string>& taints);
  void create_agent_configs();
  void create_service();
  void create_deployment(const std::string& name, std::int64_t replicas);
  void scale_deployment(const std::string& name, std::int64_t replicas);
  void touch(const std::string& kind, const std::string& name);
  void add_node_taint(const std::string& node, const std::string& taint);
  void cleanup();

  sim::Kernel* kernel_;
  cp::ApiServer* api_;
  const RunConfig* cfg_;
  Rng rng_;
  std::string name_;
  sim::SimTime cleanup_at_ = 0;
  int total_ = 0;
  int done_ = 0;
  int touch_seq_ = 0;
};

}  // namespace orchsim::run
