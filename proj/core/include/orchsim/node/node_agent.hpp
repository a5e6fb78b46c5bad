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

#include "orchsim/cp/apiserver.hpp"
#include "orchsim/model/resource.hpp"
#include "orchsim/rng.hpp"
#include "orchsim/run/config.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::node {

// Per-node agent. Runs the pods bound to its node: admits by capacity with
// priority preemption, boots them with a startup delay, crash-loops pods
// with a broken command, heartbeats the node object, and periodically
// rewrites pod status from its own runtime truth, which also repairs status
// fields corrupted behind its back.
class NodeAgent {
 public:
  NodeAgent(sim::Kernel* kernel, sim::Trace* trace, cp::ApiServer* api,
            const run::RunConfig* cfg, std::string node_name, int node_index,
            std::uint64_t seed);

  void start();

  const std::string& name() const { return name_; }
  int admitted() const;
  std::int64_t total_restarts() const { return total_restarts_; }

  // Images the runtime can actually pull and commands it can run; anything
  // else surfaces as a pull failure or a crash loop.
  static bool image_known(const std::string& image);
  static bool command_runs(const std::string& command);

 private:
  struct Runtime {
    bool admitted = false;
    bool running = false;
    bool ready = false;
    bool image_ok = true;
    bool terminating = false;
    std::int64_t restarts = 0;
    int crashes = 0;
    std::int64_t cpu = 0;
    std::int64_t mem = 0;
    std::string ip;
    std::string reason;
    std::int64_t boot_seq = 0;
  };

  void on_event(const cp::WatchEvent& ev);
  void heartbeat();
  void sync();

  void admit_sweep();
  bool try_admit(const model::ResourceKey& key);
  void schedule_boot(const model::ResourceKey& key, sim::SimTime delay);
  void boot(const model::ResourceKey& key, std::int64_t seq);
  void crash(const model::ResourceKey& key, std::int64_t seq);
  void begin_finalize(const model::ResourceKey& key);
  void handoff(const model::ResourceKey& key);
  void write_status(const model::ResourceKey& key);
  void stamp_status(model::ResourceInstance* pod, const Runtime& rt) const;
  void release(const model::ResourceKey& key);

  std::int64_t used_cpu() const;
  std::int64_t used_mem() const;
  bool muted() const;

  sim::Kernel* kernel_;
  sim::Trace* trace_;
  cp::ApiServer* api_;
  const run::RunConfig* cfg_;
  std::string name_;
  int index_;
  std::string source_;
  Rng rng_;
  sim::SimTime hb_offset_ = 0;

  std::map<model::ResourceKey, model::ResourceInstance> bound_;
  std::map<model::ResourceKey, Runtime> run_;
  std::int64_t ip_counter_ = 0;
  std::int64_t total_restarts_ = 0;
};

}  // namespace orchsim::node
