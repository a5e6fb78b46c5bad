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

#include "orchsim/model/resource.hpp"

namespace orchsim::model {

struct ValidationResult {
  bool ok = true;
  std::string reason;  // short machine-readable tag, empty when ok

  static ValidationResult accept() { return {}; }
  static ValidationResult reject(std::string why) { return {false, std::move(why)}; }
};

/// DNS-label shape: lowercase alphanumerics and '-', must start and end
/// alphanumeric, at most 63 characters.
bool dns_label_valid(const std::string& s);

/// Admission validation, applied where requests enter the control plane.
/// Rejects structural inconsistency (payload key differing from the request
/// key, selectors that cannot match their own template, out-of-range ports,
/// unknown enum values, malformed names). Values that are well-formed but
/// semantically wrong (say, a node name that exists nowhere) pass.
ValidationResult validate(const ResourceInstance& inst, const ResourceKey& request_key);

}  // namespace orchsim::model
