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
#include <vector>

#include "orchsim/model/resource.hpp"
#include "orchsim/sim/kernel.hpp"
#include "orchsim/wire/codec.hpp"

namespace orchsim::cp {

// Flat byte store. Knows nothing about the schema: every write lands as an
// opaque blob under a key, stamped with a version from one global
// transaction counter. All interpretation happens above, in the API server.
class Store {
 public:
  struct Entry {
    wire::Bytes bytes;
    std::int64_t version = 0;
    sim::SimTime written_at = 0;
  };

  // Upserts and returns the new version.
  std::int64_t put(const model::ResourceKey& key, wire::Bytes bytes, sim::SimTime now);
  // Removes the entry. The delete still consumes a transaction; returns its
  // version, or 0 when the key was absent.
  std::int64_t erase(const model::ResourceKey& key);

  const Entry* lookup(const model::ResourceKey& key) const;
  Entry* lookup_mut(const model::ResourceKey& key);

  // Keys of a kind, optionally restricted to one namespace, in key order.
  std::vector<model::ResourceKey> keys_of(const std::string& kind, const std::string& ns = "") const;

  std::size_t size() const { return entries_.size(); }
  std::int64_t last_version() const { return txn_; }

  // A store holding max_entries or more refuses growth; the API server turns
  // that into errors on create. Latches so a drained store still reports it.
  bool stalled() const { return entries_.size() >= max_entries_; }
  bool ever_stalled() const { return ever_stalled_; }
  void set_max_entries(std::size_t n) { max_entries_ = n; }

  const std::map<model::ResourceKey, Entry>& entries() const { return entries_; }

 private:
  std::map<model::ResourceKey, Entry> entries_;
  std::int64_t txn_ = 0;
  std::size_t max_entries_ = 20000;
  bool ever_stalled_ = false;
};

}  // namespace orchsim::cp
