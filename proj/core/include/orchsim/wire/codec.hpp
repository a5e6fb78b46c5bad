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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orchsim/wire/schema.hpp"

namespace orchsim::wire {

using Bytes = std::vector<std::uint8_t>;

/// Decoded scalar. Integers are signed 64-bit; negative values travel as
/// two's-complement varints like protobuf int64.
using Value = std::variant<std::int64_t, std::string, bool>;

std::string value_to_string(const Value& v);

/// A field the schema does not know. Kept opaque and re-emitted on encode so
/// unknown data survives a decode/encode round trip.
struct UnknownField {
  std::string parent;  // dotted path of the enclosing nested field, "" for top level
  std::uint32_t number = 0;
  std::uint8_t wire_type = 0;
  Bytes payload;  // varint bytes for wire type 0, raw payload for wire type 2
};

/// Flat view of a decoded message: full dotted leaf path -> values in wire
/// order. Repeated fields hold more than one value.
struct FieldMap {
  std::map<std::string, std::vector<Value>> fields;
  std::vector<UnknownField> unknowns;

  bool has(const std::string& path) const { return fields.count(path) > 0; }
  void set(const std::string& path, Value v) { fields[path] = {std::move(v)}; }
  void add(const std::string& path, Value v) { fields[path].push_back(std::move(v)); }
  void erase(const std::string& path) { fields.erase(path); }

  std::optional<std::int64_t> get_int(const std::string& path) const;
  std::optional<std::string> get_str(const std::string& path) const;
  std::optional<bool> get_bool(const std::string& path) const;
  const std::vector<Value>* get_all(const std::string& path) const;

  std::int64_t int_or(const std::string& path, std::int64_t dflt) const;
  std::string str_or(const std::string& path, const std::string& dflt) const;
  bool bool_or(const std::string& path, bool dflt) const;

  bool operator==(const FieldMap& other) const;
};

/// Undecodable input, reported as a value with the byte offset where decoding
/// failed and a short reason.
struct DecodeError {
  std::size_t offset = 0;
  std::string reason;
};

using DecodeResult = std::variant<FieldMap, DecodeError>;

inline bool decoded_ok(const DecodeResult& r) { return std::holds_alternative<FieldMap>(r); }

/// Canonical encoding: fields ascending by field number, minimal varints,
/// repeated values contiguous in order, nested messages length-delimited.
/// encode(decode(b)) == b holds for any b this encoder produced.
Bytes encode(const KindSchema& schema, const FieldMap& msg);

/// Tolerant decode: unknown field numbers are preserved opaquely; non-minimal
/// varints are accepted. Fails (as a value) on truncation, length overrun,
/// unsupported wire types, varints past 10 bytes, or a missing required field.
DecodeResult decode(const KindSchema& schema, const Bytes& bytes);

// Varint primitives, little-endian base-128 with a continuation bit.
void put_varint(Bytes& out, std::uint64_t v);
/// Returns (value, bytes consumed) or nullopt on truncation/overlong input.
std::optional<std::pair<std::uint64_t, std::size_t>> get_varint(const Bytes& in, std::size_t offset);

}  // namespace orchsim::wire
