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

#include "orchsim/cp/store.hpp"

namespace orchsim::cp {

std::int64_t Store::put(const model::ResourceKey& key, wire::Bytes bytes, sim::SimTime now) {
  Entry& e = entries_[key];
  e.bytes = std::move(bytes);
  e.version = ++txn_;
  e.written_at = now;
  if (entries_.size() >= max_entries_) ever_stalled_ = true;
  return e.version;
}

std::int64_t Store::erase(const model::ResourceKey& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) return 0;
  entries_.erase(it);
  return ++txn_;
}

const Store::Entry* Store::lookup(const model::ResourceKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

Store::Entry* Store::lookup_mut(const model::ResourceKey& key) {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<model::ResourceKey> Store::keys_of(const std::string& kind,
                                               const std::string& ns) const {
  std::vector<model::ResourceKey> out;
  for (const auto& [key, _] : entries_) {
    if (key.kind != kind) continue;
    if (!ns.empty() && key.ns != ns) continue;
    out.push_back(key);
  }
  return out;
}

}  // namespace orchsim::cp
