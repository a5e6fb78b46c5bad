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

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchsim/wire/codec.hpp"

namespace orchsim::model {

// Resource kinds understood by the control plane. NetworkAgent and DNSAgent
// are the desired-state objects for the system daemons; a controller realizes
// them as the netagent DaemonSet and the coredns Deployment.
inline const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> kinds = {
      "Pod",  "ReplicaSet", "Deployment",   "DaemonSet", "Service",
      "Node", "Endpoints",  "NetworkAgent", "DNSAgent"};
  return kinds;
}
bool is_known_kind(const std::string& kind);

struct ResourceKey {
  std::string kind;
  std::string ns;
  std::string name;

  auto operator<=>(const ResourceKey&) const = default;
  std::string str() const { return kind + "/" + ns + "/" + name; }
};

/// A resource instance is its decoded field map plus the kind that selects
/// the schema. Corrupted states (wrong types, junk strings, unknown fields)
/// are representable by construction, which is what the injector needs.
struct ResourceInstance {
  std::string kind;
  wire::FieldMap fields;

  std::string name() const { return fields.str_or("metadata.name", ""); }
  std::string ns() const { return fields.str_or("metadata.namespace", ""); }
  std::string uid() const { return fields.str_or("metadata.uid", ""); }
  std::int64_t resource_version() const { return fields.int_or("metadata.resource_version", 0); }
  ResourceKey key() const { return ResourceKey{kind, ns(), name()}; }

  std::map<std::string, std::string> labels() const { return string_map("metadata.labels."); }
  std::map<std::string, std::string> selector() const { return string_map("spec.selector."); }
  std::map<std::string, std::string> template_labels() const {
    return string_map("spec.template.labels.");
  }

  std::string owner_kind() const { return fields.str_or("metadata.owner_kind", ""); }
  std::string owner_name() const { return fields.str_or("metadata.owner_name", ""); }
  std::string owner_uid() const { return fields.str_or("metadata.owner_uid", ""); }
  bool has_owner() const { return !owner_uid().empty(); }

  // Pod accessors.
  std::string node_name() const { return fields.str_or("spec.node_name", ""); }
  std::string phase() const { return fields.str_or("status.phase", ""); }
  bool ready() const { return fields.bool_or("status.ready", false); }
  std::int64_t priority() const { return fields.int_or("spec.priority", 0); }
  std::int64_t cpu_request() const { return fields.int_or("spec.cpu_request", 0); }
  std::int64_t mem_request() const { return fields.int_or("spec.mem_request", 0); }
  std::vector<std::string> tolerations() const { return string_list("spec.tolerations"); }
  std::vector<std::string> taints() const { return string_list("spec.taints"); }

  std::int64_t replicas() const { return fields.int_or("spec.replicas", 0); }

  std::map<std::string, std::string> string_map(const std::string& path_prefix) const;
  std::vector<std::string> string_list(const std::string& path) const;
};

/// Empty selectors match nothing; otherwise every selector entry must be
/// present in the labels with an equal value.
bool selector_matches(const std::map<std::string, std::string>& selector,
                      const std::map<std::string, std::string>& labels);

/// Taints and tolerations use "key:Effect" strings. A taint is tolerated when
/// some toleration names the same key with the same effect.
struct Taint {
  std::string key;
  std::string effect;  // NoSchedule | NoExecute
};
std::optional<Taint> parse_taint(const std::string& s);
bool taint_tolerated(const Taint& t, const std::vector<std::string>& tolerations);

// Instance builders used by the harness and controllers. They produce valid,
// canonical field maps; deliberate corruption happens elsewhere.
struct Meta {
  std::string name;
  std::string ns;
  std::string uid;
  std::map<std::string, std::string> labels;
  std::string owner_kind;
  std::string owner_name;
  std::string owner_uid;
};

ResourceInstance make_basic(const std::string& kind, const Meta& meta);

// Cluster-scoped machinery (nodes, agent configs) lives here; the payload
// schema requires a namespace on everything.
inline constexpr const char* kSystemNamespace = "kube-system";

struct PodTemplate {
  std::map<std::string, std::string> labels;
  std::string image;
  std::string command;
  std::int64_t cpu_request = 0;
  std::int64_t mem_request = 0;
  std::int64_t priority = 0;
  std::vector<std::string> tolerations;

  bool operator==(const PodTemplate&) const = default;
};
void write_template(ResourceInstance& inst, const PodTemplate& tpl);
PodTemplate read_template(const ResourceInstance& inst);

// Six hex characters summarizing a pod template; replica set names embed it
// so a template change rolls over to a differently named replica set.
std::string template_hash(const PodTemplate& tpl);

// Pod built from a controller's template. node_name may pre-bind the pod.
ResourceInstance make_pod_from_template(const Meta& meta, const PodTemplate& tpl,
                                        const std::string& node_name = "");

}  // namespace orchsim::model
