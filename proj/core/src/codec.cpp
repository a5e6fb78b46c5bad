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

#include "orchsim/wire/codec.hpp"

#include <algorithm>

namespace orchsim::wire {

namespace {
constexpr std::size_t kMaxVarintBytes = 10;
}

std::string value_to_string(const Value& v) {
  if (std::holds_alternative<std::int64_t>(v)) return std::to_string(std::get<std::int64_t>(v));
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  return std::get<std::string>(v);
}

std::optional<std::int64_t> FieldMap::get_int(const std::string& path) const {
  auto it = fields.find(path);
  if (it == fields.end() || it->second.empty()) return std::nullopt;
  if (!std::holds_alternative<std::int64_t>(it->second.front())) return std::nullopt;
  return std::get<std::int64_t>(it->second.front());
}

std::optional<std::string> FieldMap::get_str(const std::string& path) const {
  auto it = fields.find(path);
  if (it == fields.end() || it->second.empty()) return std::nullopt;
  if (!std::holds_alternative<std::string>(it->second.front())) return std::nullopt;
  return std::get<std::string>(it->second.front());
}

std::optional<bool> FieldMap::get_bool(const std::string& path) const {
  auto it = fields.find(path);
  if (it == fields.end() || it->second.empty()) return std::nullopt;
  if (!std::holds_alternative<bool>(it->second.front())) return std::nullopt;
  return std::get<bool>(it->second.front());
}

const std::vector<Value>* FieldMap::get_all(const std::string& path) const {
  auto it = fields.find(path);
  return it == fields.end() ? nullptr : &it->second;
}

std::int64_t FieldMap::int_or(const std::string& path, std::int64_t dflt) const {
  auto v = get_int(path);
  return v ? *v : dflt;
}

std::string FieldMap::str_or(const std::string& path, const std::string& dflt) const {
  auto v = get_str(path);
  return v ? *v : dflt;
}

bool FieldMap::bool_or(const std::string& path, bool dflt) const {
  auto v = get_bool(path);
  return v ? *v : dflt;
}

bool FieldMap::operator==(const FieldMap& other) const {
  if (fields != other.fields) return false;
  if (unknowns.size() != other.unknowns.size()) return false;
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    const auto& a = unknowns[i];
    const auto& b = other.unknowns[i];
    if (a.parent != b.parent || a.number != b.number || a.wire_type != b.wire_type ||
        a.payload != b.payload) {
      return false;
    }
  }
  return true;
}

void put_varint(Bytes& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

std::optional<std::pair<std::uint64_t, std::size_t>> get_varint(const Bytes& in,
                                                                std::size_t offset) {
  std::uint64_t v = 0;
  std::size_t n = 0;
  while (offset + n < in.size() && n < kMaxVarintBytes) {
    const std::uint8_t b = in[offset + n];
    v |= static_cast<std::uint64_t>(b & 0x7f) << (7 * n);
    ++n;
    if ((b & 0x80) == 0) return std::make_pair(v, n);
  }
  return std::nullopt;  // truncated or overlong
}

namespace {

void put_tag(Bytes& out, std::uint32_t number, WireType wt) {
  put_varint(out, (static_cast<std::uint64_t>(number) << 3) | static_cast<std::uint64_t>(wt));
}

void encode_scope(const std::vector<FieldDescriptor>& scope, const std::string& prefix,
                  const FieldMap& msg, Bytes& out);

void encode_known(const FieldDescriptor& f, const std::string& full, const FieldMap& msg,
                  Bytes& out) {
  if (f.type == SemType::nested) {
    Bytes sub;
    encode_scope(f.children, full, msg, sub);
    if (sub.empty()) {
      // Also check for opaque unknowns living inside this nested scope.
      bool any = false;
      for (const auto& u : msg.unknowns) {
        if (u.parent == full) any = true;
      }
      if (!any) return;
    }
    put_tag(out, f.number, WireType::length_delimited);
    put_varint(out, sub.size());
    out.insert(out.end(), sub.begin(), sub.end());
    return;
  }
  const auto* values = msg.get_all(full);
  if (values == nullptr || values->empty()) return;
  for (const auto& v : *values) {
    switch (f.type) {
      case SemType::integer: {
        std::int64_t i = std::holds_alternative<std::int64_t>(v) ? std::get<std::int64_t>(v) : 0;
        put_tag(out, f.number, WireType::varint);
        put_varint(out, static_cast<std::uint64_t>(i));
        break;
      }
      case SemType::boolean: {
        bool b = std::holds_alternative<bool>(v) ? std::get<bool>(v) : false;
        put_tag(out, f.number, WireType::varint);
        put_varint(out, b ? 1 : 0);
        break;
      }
      case SemType::string: {
        const std::string s =
            std::holds_alternative<std::string>(v) ? std::get<std::string>(v) : value_to_string(v);
        put_tag(out, f.number, WireType::length_delimited);
        put_varint(out, s.size());
        out.insert(out.end(), s.begin(), s.end());
        break;
      }
      case SemType::nested:
        break;  // handled above
    }
    if (!f.repeated) break;
  }
}

void encode_unknown(const UnknownField& u, Bytes& out) {
  put_tag(out, u.number, static_cast<WireType>(u.wire_type));
  if (u.wire_type == static_cast<std::uint8_t>(WireType::length_delimited)) {
    put_varint(out, u.payload.size());
  }
  out.insert(out.end(), u.payload.begin(), u.payload.end());
}

void encode_scope(const std::vector<FieldDescriptor>& scope, const std::string& prefix,
                  const FieldMap& msg, Bytes& out) {
  // Canonical order: ascending field number, with preserved unknown fields
  // merged into the sequence at their numbers.
  std::size_t ui = 0;
  std::vector<const UnknownField*> unknowns;
  for (const auto& u : msg.unknowns) {
    if (u.parent == prefix) unknowns.push_back(&u);
  }
  std::stable_sort(unknowns.begin(), unknowns.end(),
                   [](const UnknownField* a, const UnknownField* b) { return a->number < b->number; });
  for (const auto& f : scope) {
    while (ui < unknowns.size() && unknowns[ui]->number < f.number) {
      encode_unknown(*unknowns[ui], out);
      ++ui;
    }
    const std::string full = prefix.empty() ? f.path : prefix + "." + f.path;
    encode_known(f, full, msg, out);
  }
  while (ui < unknowns.size()) {
    encode_unknown(*unknowns[ui], out);
    ++ui;
  }
}

std::optional<DecodeError> decode_scope(const std::vector<FieldDescriptor>& scope,
                                        const std::string& prefix, const Bytes& bytes,
                                        std::size_t base, std::size_t len, FieldMap& out) {
  std::size_t off = base;
  const std::size_t end = base + len;
  while (off < end) {
    const std::size_t tag_off = off;
    auto tag = get_varint(bytes, off);
    if (!tag || tag_off + tag->second > end) {
      return DecodeError{tag_off, "truncated or overlong tag"};
    }
    off += tag->second;
    const auto number = static_cast<std::uint32_t>(tag->first >> 3);
    const auto wt = static_cast<std::uint8_t>(tag->first & 0x7);
    if (number == 0) return DecodeError{tag_off, "field number 0"};
    if (wt != 0 && wt != 2) {
      return DecodeError{tag_off, "unsupported wire type " + std::to_string(wt)};
    }
    const FieldDescriptor* desc = nullptr;
    for (const auto& f : scope) {
      if (f.number == number) desc = &f;
    }
    if (wt == 0) {
      auto val = get_varint(bytes, off);
      if (!val || off + val->second > end) return DecodeError{off, "truncated varint value"};
      const std::size_t vstart = off;
      off += val->second;
      if (desc != nullptr && desc->wire_type() == WireType::varint) {
        const std::string full = prefix.empty() ? desc->path : prefix + "." + desc->path;
        Value v = desc->type == SemType::boolean ? Value(val->first != 0)
                                                 : Value(static_cast<std::int64_t>(val->first));
        if (desc->repeated) {
          out.add(full, std::move(v));
        } else {
          out.set(full, std::move(v));  // last occurrence wins
        }
      } else {
        out.unknowns.push_back(
            UnknownField{prefix, number, wt, Bytes(bytes.begin() + vstart, bytes.begin() + off)});
      }
    } else {
      auto vlen = get_varint(bytes, off);
      if (!vlen || off + vlen->second > end) return DecodeError{off, "truncated length"};
      off += vlen->second;
      if (off + vlen->first > end) {
        return DecodeError{off, "length overruns message (" + std::to_string(vlen->first) + ")"};
      }
      const std::size_t pstart = off;
      off += vlen->first;
      if (desc != nullptr && desc->wire_type() == WireType::length_delimited) {
        const std::string full = prefix.empty() ? desc->path : prefix + "." + desc->path;
        if (desc->type == SemType::nested) {
          auto err = decode_scope(desc->children, full, bytes, pstart, vlen->first, out);
          if (err) return err;
        } else {
          Value v = std::string(bytes.begin() + pstart, bytes.begin() + off);
          if (desc->repeated) {
            out.add(full, std::move(v));
          } else {
            out.set(full, std::move(v));
          }
        }
      } else {
        out.unknowns.push_back(
            UnknownField{prefix, number, wt, Bytes(bytes.begin() + pstart, bytes.begin() + off)});
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Bytes encode(const KindSchema& schema, const FieldMap& msg) {
  Bytes out;
  encode_scope(schema.fields, "", msg, out);
  return out;
}

DecodeResult decode(const KindSchema& schema, const Bytes& bytes) {
  FieldMap out;
  auto err = decode_scope(schema.fields, "", bytes, 0, bytes.size(), out);
  if (err) return *err;
  for (const auto& f : schema.fields) {
    if (f.required && !out.has(f.path)) {
      return DecodeError{bytes.size(), "required field missing: " + f.path};
    }
  }
  return out;
}

}  // namespace orchsim::wire
