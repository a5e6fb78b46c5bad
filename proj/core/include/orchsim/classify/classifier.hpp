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

#include <string>
#include <vector>

#include "orchsim/classify/baseline.hpp"
#include "orchsim/run/record.hpp"

namespace orchsim::classify {

// Orchestrator-level failure classes, ordered by severity. A run can show
// evidence for several at once; the label is the most severe one present.
enum class OF {
  No = 0,   // indistinguishable from golden behavior
  Tim = 1,  // converged, but late: restarts, slow startups, late creations
  LeR = 2,  // steady state holds fewer replicas than desired
  MoR = 3,  // steady state holds more replicas than desired
  Net = 4,  // pods fine, traffic plumbing (endpoints, agents) broken
  Sta = 5,  // stability loss: runaway creation, store pressure, stuck loops
  Out = 6,  // total outage of a monitored service
};

// Client-side failure classes, ordered by reporting priority. Exactly one
// applies: a persistent outage outranks intermittent errors, which outrank
// a latency shift. Timeouts pad the latency series with zeros and therefore
// surface as HRT, never as IA.
enum class CF {
  NSI = 0,  // no service impact
  HRT = 1,  // high response times
  IA = 2,   // intermittent non-timeout errors among successes
  SU = 3,   // from some request onward, every request fails
};

int of_rank(OF c);
const char* of_name(OF c);
OF of_from_name(const std::string& name);
int cf_rank(CF c);
const char* cf_name(CF c);
CF cf_from_name(const std::string& name);

struct Evidence {
  std::string cls;   // OF or CF class name this evidence argues for
  std::string code;  // stable rule identifier
  Json detail;       // rule-specific numbers

  Json to_json() const;
};

struct Classification {
  OF of = OF::No;
  CF cf = CF::NSI;
  std::vector<Evidence> of_evidence;
  std::vector<Evidence> cf_evidence;

  double mae = 0;
  double z_mae = 0;
  double z_worst_startup = 0;
  double z_last_creation = 0;

  bool has_evidence(const std::string& code) const;
  Json to_json() const;
};

// Orchestrator rules are cheap checks against the baseline; every firing
// rule contributes evidence and the label is the most severe class with
// evidence. The client label comes from the first matching rule in priority
// order (SU, IA, HRT), so cf_evidence holds at most one entry.
Classification classify(const run::ExperimentRecord& r, const Baseline& b);

// Rule thresholds, shared with tests.
inline constexpr double kZMaeForHRT = 2.0;
inline constexpr double kZForTim = 3.0;
inline constexpr int kSpawnLoopCreates = 10;
inline constexpr sim::SimTime kStuckWindowMs = 30000;

}  // namespace orchsim::classify
