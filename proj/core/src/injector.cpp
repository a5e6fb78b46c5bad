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

#include "orchsim/inject/injector.hpp"

#include "orchsim/wire/corrupt.hpp"

namespace orchsim::inject {

using wire::Bytes;
using wire::FieldMap;
using wire::Value;

Injector::Injector(const wire::SchemaSet* schema, InjectionSpec spec)
    : schema_(schema), spec_(std::move(spec)) {}

void Injector::arm() {
  if (spec_.when < 1) throw ConfigError("when must be >= 1");
  const wire::KindSchema* ks = schema_->find(spec_.kind);
  if (!ks) throw ConfigError("unknown kind: " + spec_.kind);

  const bool is_drop = std::holds_alternative<Drop>(spec_.fault);
  if (is_drop) {
    if (spec_.field || spec_.raw) throw ConfigError("drop takes no field or raw target");
    if (spec_.channel.type == cp::ChannelType::at_rest) {
      throw ConfigError("nothing to drop at rest");
    }
  } else {
    if (spec_.field.has_value() == spec_.raw.has_value()) {
      throw ConfigError("need exactly one of field or raw target");
    }
    if (spec_.raw && !std::holds_alternative<BitFlip>(spec_.fault)) {
      throw ConfigError("raw target only supports bit flips");
    }
    if (spec_.raw && (spec_.raw->bit < 0 || spec_.raw->bit > 7)) {
      throw ConfigError("raw bit must be 0..7");
    }
    if (spec_.field) {
      const wire::FieldDescriptor* fd = ks->by_path(*spec_.field);
      if (!fd) throw ConfigError("kind " + spec_.kind + " has no field " + *spec_.field);
      if (fd->type == wire::SemType::nested) {
        throw ConfigError("cannot target a nested group: " + *spec_.field);
      }
      if (const auto* vs = std::get_if<ValueSet>(&spec_.fault)) {
        const bool type_ok =
            (fd->type == wire::SemType::integer &&
             std::holds_alternative<std::int64_t>(vs->value)) ||
            (fd->type == wire::SemType::string && std::holds_alternative<std::string>(vs->value)) ||
            (fd->type == wire::SemType::boolean && std::holds_alternative<bool>(vs->value));
        if (!type_ok) throw ConfigError("value type does not match field " + *spec_.field);
      }
      if (const auto* bf = std::get_if<BitFlip>(&spec_.fault)) {
        if (bf->bit_index < 1) throw ConfigError("bit_index is 1-based");
        if (fd->type == wire::SemType::integer && bf->bit_index > 64) {
          throw ConfigError("bit_index beyond 64 for integer field");
        }
        if (fd->type == wire::SemType::boolean && bf->bit_index != 1) {
          throw ConfigError("boolean fields have a single bit");
        }
      }
    }
  }
  outcome_.armed = true;
}

bool Injector::matches(const cp::ChannelId& channel, const model::ResourceKey& key) const {
  if (!spec_.channel.covers(channel)) return false;
  if (key.kind != spec_.kind) return false;
  if (!spec_.ns.empty() && key.ns != spec_.ns) return false;
  if (!spec_.name.empty() && key.name != spec_.name) return false;
  return true;
}

Injector::Action Injector::intercept(cp::WireMessage& msg, sim::SimTime now) {
  if (!outcome_.armed || spent_) return Action::pass;
  if (spec_.channel.type == cp::ChannelType::at_rest) return Action::pass;
  if (!cp::is_write(msg.op)) return Action::pass;
  if (!matches(msg.channel, msg.key)) return Action::pass;
  if (++occurrences_[msg.key] < spec_.when) return Action::pass;
  return fire(msg.payload, msg.key, now);
}

bool Injector::on_applied_write(const model::ResourceKey& key, Bytes& stored, sim::SimTime now) {
  if (!outcome_.armed || spent_) return false;
  if (spec_.channel.type != cp::ChannelType::at_rest) return false;
  if (!matches(cp::ChannelId{cp::ChannelType::at_rest, ""}, key)) return false;
  if (++occurrences_[key] < spec_.when) return false;
  const Bytes before = stored;
  fire(stored, key, now);
  return stored != before;
}

void Injector::note_access(const model::ResourceKey& key, sim::SimTime now) {
  if (!spent_ || !outcome_.fired || outcome_.activated) return;
  if (key == target_key_) {
    outcome_.activated = true;
    outcome_.activated_at = now;
  }
}

Injector::Action Injector::fire(Bytes& payload, const model::ResourceKey& key, sim::SimTime now) {
  spent_ = true;
  target_key_ = key;
  outcome_.target = key.str();
  if (std::holds_alternative<Drop>(spec_.fault)) {
    outcome_.fired = true;
    outcome_.fired_at = now;
    return Action::drop;
  }
  const bool applied = spec_.raw ? apply_raw_fault(payload) : apply_field_fault(payload, key);
  if (applied) {
    outcome_.fired = true;
    outcome_.fired_at = now;
  }
  return Action::pass;
}

bool Injector::apply_raw_fault(Bytes& payload) {
  const auto& rt = *spec_.raw;
  if (rt.offset >= payload.size()) {
    outcome_.not_applicable_reason = "offset beyond payload";
    return false;
  }
  outcome_.pre_value = to_hex({payload[rt.offset]});
  wire::flip_raw_byte(payload, rt.offset, rt.bit);
  outcome_.post_value = to_hex({payload[rt.offset]});
  return true;
}

bool Injector::apply_field_fault(Bytes& payload, const model::ResourceKey& key) {
  const wire::KindSchema& ks = schema_->at(key.kind);
  wire::DecodeResult dr = wire::decode(ks, payload);
  if (!wire::decoded_ok(dr)) {
    outcome_.not_applicable_reason = "payload undecodable";
    return false;
  }
  FieldMap fm = std::get<FieldMap>(std::move(dr));
  const std::string& path = *spec_.field;
  const std::vector<Value>* present = fm.get_all(path);

  if (const auto* bf = std::get_if<BitFlip>(&spec_.fault)) {
    if (!present || present->empty()) {
      outcome_.not_applicable_reason = "field absent";
      return false;
    }
    const Value before = present->front();
    auto flipped = wire::flip_bit_in_field(before, bf->bit_index);
    if (!flipped) {
      outcome_.not_applicable_reason = "value too short for bit index";
      return false;
    }
    outcome_.pre_value = wire::value_to_string(before);
    outcome_.post_value = wire::value_to_string(*flipped);
    std::vector<Value> all = *present;
    all[0] = *flipped;
    fm.erase(path);
    for (const auto& v : all) fm.add(path, v);
  } else {
    const auto& vs = std::get<ValueSet>(spec_.fault);
    outcome_.pre_value =
        (!present || present->empty()) ? "<absent>" : wire::value_to_string(present->front());
    outcome_.post_value = wire::value_to_string(vs.value);
    fm.set(path, vs.value);
  }
  payload = wire::encode(ks, fm);
  return true;
}

}  // namespace orchsim::inject
