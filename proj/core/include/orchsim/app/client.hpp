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
#include "orchsim/rng.hpp"
#include "orchsim/run/config.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::app {

struct RequestResult {
  sim::SimTime at = 0;
  double latency_ms = 0;  // stays 0 for failed requests
  std::string error;      // "", no_endpoint, conn_refused, net_partition, timeout
};

// Fixed-rate workload probe against one service. Requests round-robin the
// service's endpoints; each endpoint is a FIFO server, so latency is queueing
// delay plus service time. Failure modes, checked in order: no endpoints at
// all, endpoint pointing at a pod that cannot serve, no network agent on the
// pod's node, response past the client timeout.
class ClientProbe {
 public:
  ClientProbe(sim::Kernel* kernel, cp::ApiServer* api, const run::RunConfig* cfg,
              std::uint64_t seed, sim::SimTime start_at, std::string ns, std::string service);

  void start();

  const std::vector<RequestResult>& results() const { return results_; }
  int planned_requests() const { return planned_; }
  bool done() const { return static_cast<int>(results_.size()) >= planned_; }
  int error_count() const;

 private:
  void issue();
  std::string route(std::string* error);

  sim::Kernel* kernel_;
  cp::ApiServer* api_;
  const run::RunConfig* cfg_;
  Rng rng_;
  sim::SimTime start_at_;
  std::string ns_;
  std::string service_;
  int planned_ = 0;
  double run_offset_ = 0;
  std::size_t rr_ = 0;
  std::map<std::string, double> busy_until_;
  std::vector<RequestResult> results_;
};

}  // namespace orchsim::app
