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
#include <stdexcept>
#include <string>
#include <vector>

namespace orchsim::wire {

/// Wire types follow the usual tag-length-value scheme:
/// varint carries ints and bools, length_delimited carries strings and
/// nested messages. The tag byte is (field_number << 3) | wire_type.
enum class WireType : std::uint8_t { varint = 0, length_delimited = 2 };

enum class SemType : std::uint8_t { integer, string, boolean, nested };

struct FieldDescriptor {
  std::uint32_t number = 0;
  std::string path;  // dotted, relative to the enclosing message
  SemType type = SemType::string;
  bool required = false;
  bool repeated = false;
  std::vector<FieldDescriptor> children;  // only for SemType::nested

  WireType wire_type() const {
    return (type == SemType::integer || type == SemType::boolean) ? WireType::varint
                                                                  : WireType::length_delimited;
  }
};

/// Field layout of one resource kind, sorted by field number.
struct KindSchema {
  std::string kind;
  std::vector<FieldDescriptor> fields;

  const FieldDescriptor* by_number(std::uint32_t n) const;
  /// Finds a descriptor by full dotted path, descending into nested fields
  /// ("spec.template.labels.app"). Returns nullptr if absent.
  const FieldDescriptor* by_path(const std::string& dotted) const;
  /// All leaf paths (flattened through nesting) with their semantic types.
  std::vector<std::pair<std::string, SemType>> leaf_paths() const;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The full schema set, loaded from the schema JSON shipped with the
/// artifact. Field numbers are frozen by that file.
class SchemaSet {
 public:
  static SchemaSet parse(const std::string& json_text);
  static const SchemaSet& embedded();

  const KindSchema* find(const std::string& kind) const;
  const KindSchema& at(const std::string& kind) const;
  std::vector<std::string> kind_names() const;

 private:
  std::map<std::string, KindSchema> kinds_;
};

}  // namespace orchsim::wire
