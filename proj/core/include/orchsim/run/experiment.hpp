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
#include <optional>
#include <string>

#include "orchsim/cp/channel.hpp"
#include "orchsim/inject/spec.hpp"
#include "orchsim/run/config.hpp"
#include "orchsim/run/record.hpp"

namespace orchsim::run {

struct ExperimentSpec {
  std::string id;
  std::string workload = "deploy";
  RunConfig config;
  std::optional<inject::InjectionSpec> injection;
};

struct ExperimentOutput {
  ExperimentRecord record;
  std::string trace_text;
  // Set when the injection spec itself was rejected while arming; the run
  // is not performed in that case.
  bool config_error = false;
  std::string config_error_detail;
};

// Optional taps for tooling that watches a run from the inside. Hooks never
// influence the run; a hooked run produces the same record as a bare one.
struct RunHooks {
  // One call per applied create/update with the bytes announced to watchers.
  std::function<void(cp::Op op, const model::ResourceKey& key, const wire::Bytes& bytes)>
      on_store_write;
};

// One full simulated run: cluster boot, workload script, client probe,
// optional fault injection, metrics sampling, and teardown detection. The
// run ends at quiescence (no meaningful writes for the configured window
// after cleanup) or at the time limit, whichever comes first.
ExperimentOutput run_experiment(const ExperimentSpec& spec, const RunHooks* hooks = nullptr);

}  // namespace orchsim::run
