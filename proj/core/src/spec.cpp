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

#include "orchsim/inject/spec.hpp"

namespace orchsim::inject {

const char* InjectionSpec::fault_name() const {
  if (std::holds_alternative<BitFlip>(fault)) return "bitflip";
  if (std::holds_alternative<ValueSet>(fault)) return "valueset";
  return "drop";
}

Json InjectionSpec::to_json() const {
  Json j;
  j["id"] = id;
  j["channel"] = channel.str();
  j["kind"] = kind;
  if (!ns.empty()) j["namespace"] = ns;
  if (!name.empty()) j["name"] = name;
  if (field) j["field"] = *field;
  if (raw) {
    j["raw"] = Json{{"offset", raw->offset}, {"bit", raw->bit}};
  }
  j["fault"] = fault_name();
  if (const auto* bf = std::get_if<BitFlip>(&fault)) {
    j["bit_index"] = bf->bit_index;
  } else if (const auto* vs = std::get_if<ValueSet>(&fault)) {
    if (std::holds_alternative<std::int64_t>(vs->value)) {
      j["value"] = std::get<std::int64_t>(vs->value);
    } else if (std::holds_alternative<bool>(vs->value)) {
      j["value"] = std::get<bool>(vs->value);
    } else {
      j["value"] = std::get<std::string>(vs->value);
    }
  }
  j["when"] = when;
  return j;
}

InjectionSpec InjectionSpec::from_json(const Json& j) {
  InjectionSpec s;
  s.id = j.value("id", "");
  auto ch = cp::ChannelId::parse(j.value("channel", ""));
  if (!ch) throw ConfigError("bad channel: " + j.value("channel", ""));
  s.channel = *ch;
  s.kind = j.value("kind", "");
  s.ns = j.value("namespace", "");
  s.name = j.value("name", "");
  if (j.contains("field")) s.field = j.at("field").get<std::string>();
  if (j.contains("raw")) {
    RawTarget rt;
    rt.offset = j.at("raw").value("offset", std::size_t{0});
    rt.bit = j.at("raw").value("bit", 0);
    s.raw = rt;
  }
  const std::string fault = j.value("fault", "");
  if (fault == "bitflip") {
    s.fault = BitFlip{j.value("bit_index", 1)};
  } else if (fault == "valueset") {
    if (!j.contains("value")) throw ConfigError("valueset without value");
    const auto& v = j.at("value");
    if (v.is_boolean()) {
      s.fault = ValueSet{wire::Value{v.get<bool>()}};
    } else if (v.is_number_integer()) {
      s.fault = ValueSet{wire::Value{v.get<std::int64_t>()}};
    } else if (v.is_string()) {
      s.fault = ValueSet{wire::Value{v.get<std::string>()}};
    } else {
      throw ConfigError("valueset value must be int, bool or string");
    }
  } else if (fault == "drop") {
    s.fault = Drop{};
  } else {
    throw ConfigError("bad fault: " + fault);
  }
  s.when = j.value("when", 1);
  return s;
}

Json InjectionOutcome::to_json() const {
  Json j;
  j["armed"] = armed;
  j["fired"] = fired;
  j["fired_at"] = fired_at;
  j["target"] = target;
  j["not_applicable_reason"] = not_applicable_reason;
  j["pre_value"] = pre_value;
  j["post_value"] = post_value;
  j["activated"] = activated;
  j["activated_at"] = activated_at;
  return j;
}

}  // namespace orchsim::inject
