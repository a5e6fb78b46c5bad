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

#include "orchsim/model/validate.hpp"

namespace orchsim::model {

namespace {

bool lower_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

bool label_value_valid(const std::string& s) {
  if (s.empty()) return true;
  if (s.size() > 63) return false;
  auto ok_inner = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '-' || c == '_' || c == '.';
  };
  auto alnum = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  };
  if (!alnum(s.front()) || !alnum(s.back())) return false;
  for (char c : s) {
    if (!ok_inner(c)) return false;
  }
  return true;
}

ValidationResult check_port(const ResourceInstance& inst, const std::string& path) {
  auto port = inst.fields.get_int(path);
  if (port && (*port < 1 || *port > 65535)) return ValidationResult::reject("port_range");
  return ValidationResult::accept();
}

ValidationResult check_protocol(const ResourceInstance& inst, const std::string& path) {
  auto proto = inst.fields.get_str(path);
  if (proto && !proto->empty() && *proto != "TCP" && *proto != "UDP") {
    return ValidationResult::reject("protocol_enum");
  }
  return ValidationResult::accept();
}

ValidationResult check_taint_list(const std::vector<std::string>& entries, const char* tag) {
  for (const auto& e : entries) {
    if (!parse_taint(e)) return ValidationResult::reject(tag);
  }
  return ValidationResult::accept();
}

bool has_template(const ResourceInstance& inst) {
  for (const auto& [path, _] : inst.fields.fields) {
    if (path.rfind("spec.template.", 0) == 0) return true;
  }
  return false;
}

ValidationResult check_workload_shape(const ResourceInstance& inst) {
  // A selector that cannot select its own template's pods would make the
  // owning controller spawn children it never recognizes.
  if (!selector_matches(inst.selector(), inst.template_labels())) {
    return ValidationResult::reject("selector_template_mismatch");
  }
  if (has_template(inst) && inst.fields.str_or("spec.template.image", "").empty()) {
    return ValidationResult::reject("empty_template_image");
  }
  for (const auto& [k, v] : inst.template_labels()) {
    if (!label_value_valid(v)) return ValidationResult::reject("label_value");
  }
  return ValidationResult::accept();
}

}  // namespace

bool dns_label_valid(const std::string& s) {
  if (s.empty() || s.size() > 63) return false;
  if (!lower_alnum(s.front()) || !lower_alnum(s.back())) return false;
  for (char c : s) {
    if (!lower_alnum(c) && c != '-') return false;
  }
  return true;
}

ValidationResult validate(const ResourceInstance& inst, const ResourceKey& request_key) {
  if (!dns_label_valid(inst.name())) return ValidationResult::reject("name_format");
  if (!dns_label_valid(inst.ns())) return ValidationResult::reject("namespace_format");
  if (inst.name() != request_key.name) return ValidationResult::reject("key_mismatch_name");
  if (inst.ns() != request_key.ns) return ValidationResult::reject("key_mismatch_namespace");
  for (const auto& [k, v] : inst.labels()) {
    if (!label_value_valid(v)) return ValidationResult::reject("label_value");
  }

  const std::string& kind = inst.kind;
  if (kind == "ReplicaSet" || kind == "Deployment" || kind == "DaemonSet") {
    if (auto r = check_workload_shape(inst); !r.ok) return r;
    if (kind != "DaemonSet" && inst.fields.int_or("spec.replicas", 0) < 0) {
      return ValidationResult::reject("negative_replicas");
    }
  } else if (kind == "Pod") {
    if (inst.fields.str_or("spec.image", "").empty()) {
      return ValidationResult::reject("empty_image");
    }
    const std::string phase = inst.phase();
    if (!phase.empty() && phase != "Pending" && phase != "Running" && phase != "Terminating" &&
        phase != "Failed") {
      return ValidationResult::reject("phase_enum");
    }
    if (inst.cpu_request() < 0 || inst.mem_request() < 0) {
      return ValidationResult::reject("negative_resources");
    }
    if (inst.fields.int_or("status.restart_count", 0) < 0) {
      return ValidationResult::reject("negative_restart_count");
    }
    const std::string node = inst.node_name();
    if (!node.empty() && !dns_label_valid(node)) return ValidationResult::reject("node_name_format");
    if (auto r = check_taint_list(inst.tolerations(), "toleration_format"); !r.ok) return r;
  } else if (kind == "Service") {
    if (auto r = check_port(inst, "spec.port"); !r.ok) return r;
    if (auto r = check_protocol(inst, "spec.protocol"); !r.ok) return r;
  } else if (kind == "Endpoints") {
    if (auto r = check_port(inst, "subsets.port"); !r.ok) return r;
    if (auto r = check_protocol(inst, "subsets.protocol"); !r.ok) return r;
  } else if (kind == "Node") {
    if (auto r = check_taint_list(inst.taints(), "taint_format"); !r.ok) return r;
    if (inst.fields.int_or("spec.capacity_cpu", 0) < 0 ||
        inst.fields.int_or("spec.capacity_mem", 0) < 0) {
      return ValidationResult::reject("negative_capacity");
    }
  } else if (kind == "DNSAgent") {
    if (inst.fields.int_or("spec.replicas", 0) < 0) {
      return ValidationResult::reject("negative_replicas");
    }
  }
  return ValidationResult::accept();
}

}  // namespace orchsim::model
