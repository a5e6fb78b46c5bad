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

#include "orchsim/wire/schema.hpp"

#include <algorithm>

#include "orchsim/jsonx.hpp"
#include "orchsim/wire/schema_data.hpp"

namespace orchsim::wire {

namespace {

SemType sem_type_from(const std::string& s) {
  if (s == "int") return SemType::integer;
  if (s == "string") return SemType::string;
  if (s == "bool") return SemType::boolean;
  if (s == "nested") return SemType::nested;
  throw SchemaError("unknown field type: " + s);
}

FieldDescriptor field_from_json(const Json& j, const std::vector<FieldDescriptor>& template_fields) {
  FieldDescriptor f;
  f.number = j.at("number").get<std::uint32_t>();
  f.path = j.at("path").get<std::string>();
  f.type = sem_type_from(j.at("type").get<std::string>());
  f.required = j.value("required", false);
  f.repeated = j.value("repeated", false);
  if (f.type == SemType::nested) f.children = template_fields;
  return f;
}

void collect_leaves(const std::vector<FieldDescriptor>& fields, const std::string& prefix,
                    std::vector<std::pair<std::string, SemType>>& out) {
  for (const auto& f : fields) {
    const std::string full = prefix.empty() ? f.path : prefix + "." + f.path;
    if (f.type == SemType::nested) {
      collect_leaves(f.children, full, out);
    } else {
      out.emplace_back(full, f.type);
    }
  }
}

}  // namespace

const FieldDescriptor* KindSchema::by_number(std::uint32_t n) const {
  for (const auto& f : fields) {
    if (f.number == n) return &f;
  }
  return nullptr;
}

const FieldDescriptor* KindSchema::by_path(const std::string& dotted) const {
  const std::vector<FieldDescriptor>* scope = &fields;
  std::string remaining = dotted;
  while (true) {
    // Longest-prefix match within the current scope, then descend.
    const FieldDescriptor* best = nullptr;
    for (const auto& f : *scope) {
      if (remaining == f.path) return &f;
      if (f.type == SemType::nested && remaining.rfind(f.path + ".", 0) == 0) best = &f;
    }
    if (best == nullptr) return nullptr;
    remaining = remaining.substr(best->path.size() + 1);
    scope = &best->children;
  }
}

std::vector<std::pair<std::string, SemType>> KindSchema::leaf_paths() const {
  std::vector<std::pair<std::string, SemType>> out;
  collect_leaves(fields, "", out);
  return out;
}

SchemaSet SchemaSet::parse(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("schema file is not valid JSON: ") + e.what());
  }
  std::vector<FieldDescriptor> template_fields;
  for (const auto& j : doc.at("template_fields")) {
    template_fields.push_back(field_from_json(j, {}));
  }
  std::vector<FieldDescriptor> common;
  for (const auto& j : doc.at("common_fields")) {
    common.push_back(field_from_json(j, template_fields));
  }
  SchemaSet set;
  for (auto it = doc.at("kinds").begin(); it != doc.at("kinds").end(); ++it) {
    KindSchema ks;
    ks.kind = it.key();
    ks.fields = common;
    for (const auto& j : it.value()) {
      ks.fields.push_back(field_from_json(j, template_fields));
    }
    std::sort(ks.fields.begin(), ks.fields.end(),
              [](const FieldDescriptor& a, const FieldDescriptor& b) { return a.number < b.number; });
    for (std::size_t i = 1; i < ks.fields.size(); ++i) {
      if (ks.fields[i].number == ks.fields[i - 1].number) {
        throw SchemaError("duplicate field number in kind " + ks.kind);
      }
    }
    set.kinds_.emplace(ks.kind, std::move(ks));
  }
  return set;
}

const SchemaSet& SchemaSet::embedded() {
  static const SchemaSet set = SchemaSet::parse(kEmbeddedSchemaJson);
  return set;
}

const KindSchema* SchemaSet::find(const std::string& kind) const {
  auto it = kinds_.find(kind);
  return it == kinds_.end() ? nullptr : &it->second;
}

const KindSchema& SchemaSet::at(const std::string& kind) const {
  const KindSchema* k = find(kind);
  if (k == nullptr) throw SchemaError("unknown kind: " + kind);
  return *k;
}

std::vector<std::string> SchemaSet::kind_names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : kinds_) out.push_back(k);
  return out;
}

}  // namespace orchsim::wire
