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

#include "orchsim/model/resource.hpp"

#include <algorithm>

#include "orchsim/jsonx.hpp"

namespace orchsim::model {

bool is_known_kind(const std::string& kind) {
  const auto& k = kind_names();
  return std::find(k.begin(), k.end(), kind) != k.end();
}

std::map<std::string, std::string> ResourceInstance::string_map(
    const std::string& path_prefix) const {
  std::map<std::string, std::string> out;
  for (const auto& [path, values] : fields.fields) {
    if (path.rfind(path_prefix, 0) != 0 || values.empty()) continue;
    const std::string sub = path.substr(path_prefix.size());
    if (sub.find('.') != std::string::npos) continue;  // deeper scope, not this map
    if (std::holds_alternative<std::string>(values.front())) {
      out[sub] = std::get<std::string>(values.front());
    }
  }
  return out;
}

std::vector<std::string> ResourceInstance::string_list(const std::string& path) const {
  std::vector<std::string> out;
  const auto* values = fields.get_all(path);
  if (values == nullptr) return out;
  for (const auto& v : *values) {
    if (std::holds_alternative<std::string>(v)) out.push_back(std::get<std::string>(v));
  }
  return out;
}

bool selector_matches(const std::map<std::string, std::string>& selector,
                      const std::map<std::string, std::string>& labels) {
  if (selector.empty()) return false;
  for (const auto& [k, v] : selector) {
    auto it = labels.find(k);
    if (it == labels.end() || it->second != v) return false;
  }
  return true;
}

std::optional<Taint> parse_taint(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size()) return std::nullopt;
  Taint t{s.substr(0, colon), s.substr(colon + 1)};
  if (t.effect != "NoSchedule" && t.effect != "NoExecute") return std::nullopt;
  return t;
}

bool taint_tolerated(const Taint& t, const std::vector<std::string>& tolerations) {
  for (const auto& tol : tolerations) {
    auto parsed = parse_taint(tol);
    if (parsed && parsed->key == t.key && parsed->effect == t.effect) return true;
  }
  return false;
}

ResourceInstance make_basic(const std::string& kind, const Meta& meta) {
  ResourceInstance inst;
  inst.kind = kind;
  inst.fields.set("metadata.name", meta.name);
  inst.fields.set("metadata.namespace", meta.ns);
  if (!meta.uid.empty()) inst.fields.set("metadata.uid", meta.uid);
  for (const auto& [k, v] : meta.labels) inst.fields.set("metadata.labels." + k, v);
  if (!meta.owner_uid.empty()) {
    inst.fields.set("metadata.owner_kind", meta.owner_kind);
    inst.fields.set("metadata.owner_name", meta.owner_name);
    inst.fields.set("metadata.owner_uid", meta.owner_uid);
  }
  return inst;
}

void write_template(ResourceInstance& inst, const PodTemplate& tpl) {
  for (const auto& [k, v] : tpl.labels) inst.fields.set("spec.template.labels." + k, v);
  inst.fields.set("spec.template.image", tpl.image);
  inst.fields.set("spec.template.command", tpl.command);
  inst.fields.set("spec.template.cpu_request", tpl.cpu_request);
  inst.fields.set("spec.template.mem_request", tpl.mem_request);
  inst.fields.set("spec.template.priority", tpl.priority);
  for (const auto& t : tpl.tolerations) inst.fields.add("spec.template.tolerations", t);
}

PodTemplate read_template(const ResourceInstance& inst) {
  PodTemplate tpl;
  tpl.labels = inst.string_map("spec.template.labels.");
  tpl.image = inst.fields.str_or("spec.template.image", "");
  tpl.command = inst.fields.str_or("spec.template.command", "");
  tpl.cpu_request = inst.fields.int_or("spec.template.cpu_request", 0);
  tpl.mem_request = inst.fields.int_or("spec.template.mem_request", 0);
  tpl.priority = inst.fields.int_or("spec.template.priority", 0);
  tpl.tolerations = inst.string_list("spec.template.tolerations");
  return tpl;
}

std::string template_hash(const PodTemplate& tpl) {
  std::string blob;
  for (const auto& [k, v] : tpl.labels) blob += k + "=" + v + ";";
  blob += tpl.image + ";" + tpl.command + ";";
  blob += std::to_string(tpl.cpu_request) + ";" + std::to_string(tpl.mem_request) + ";";
  blob += std::to_string(tpl.priority) + ";";
  for (const auto& t : tpl.tolerations) blob += t + ";";
  return digest_hex(blob).substr(0, 6);
}

ResourceInstance make_pod_from_template(const Meta& meta, const PodTemplate& tpl,
                                        const std::string& node_name) {
  Meta m = meta;
  m.labels = tpl.labels;
  ResourceInstance pod = make_basic("Pod", m);
  if (!node_name.empty()) pod.fields.set("spec.node_name", node_name);
  pod.fields.set("spec.image", tpl.image);
  if (!tpl.command.empty()) pod.fields.set("spec.command", tpl.command);
  pod.fields.set("spec.cpu_request", tpl.cpu_request);
  pod.fields.set("spec.mem_request", tpl.mem_request);
  pod.fields.set("spec.priority", tpl.priority);
  for (const auto& t : tpl.tolerations) pod.fields.add("spec.tolerations", t);
  pod.fields.set("status.phase", std::string("Pending"));
  pod.fields.set("status.ready", false);
  pod.fields.set("status.restart_count", std::int64_t{0});
  return pod;
}

}  // namespace orchsim::model
