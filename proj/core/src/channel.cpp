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

#include "orchsim/cp/channel.hpp"

namespace orchsim::cp {

std::string ChannelId::str() const {
  switch (type) {
    case ChannelType::to_store:
      return "to_store";
    case ChannelType::at_rest:
      return "at_rest";
    case ChannelType::to_api:
      break;
  }
  return source.empty() ? "to_api" : "to_api:" + source;
}

std::optional<ChannelId> ChannelId::parse(const std::string& text) {
  if (text == "to_store") return ChannelId{ChannelType::to_store, ""};
  if (text == "at_rest") return ChannelId{ChannelType::at_rest, ""};
  if (text == "to_api") return ChannelId{ChannelType::to_api, ""};
  const std::string prefix = "to_api:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
    return ChannelId{ChannelType::to_api, text.substr(prefix.size())};
  }
  return std::nullopt;
}

bool ChannelId::covers(const ChannelId& concrete) const {
  if (type != concrete.type) return false;
  if (source.empty()) return true;
  if (source == concrete.source) return true;
  return concrete.source.rfind(source + ":", 0) == 0;
}

const char* op_name(Op op) {
  switch (op) {
    case Op::create:
      return "create";
    case Op::update:
      return "update";
    case Op::del:
      return "delete";
    case Op::get:
      return "get";
    case Op::list:
      return "list";
  }
  return "?";
}

std::optional<Op> op_from_name(const std::string& name) {
  if (name == "create") return Op::create;
  if (name == "update") return Op::update;
  if (name == "delete") return Op::del;
  if (name == "get") return Op::get;
  if (name == "list") return Op::list;
  return std::nullopt;
}

}  // namespace orchsim::cp
