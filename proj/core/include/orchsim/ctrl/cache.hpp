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

#include <map>
#include <vector>

#include "orchsim/cp/apiserver.hpp"
#include "orchsim/model/resource.hpp"
#include "orchsim/sim/kernel.hpp"

namespace orchsim::ctrl {

// Watch-fed view of the cluster held by a controller. Also remembers how
// long a pod has been sitting in a phase, which the store itself does not
// record; those clocks survive re-list but not a controller restart.
class ObjectCache {
 public:
  struct Meta {
    sim::SimTime first_seen = -1;
    sim::SimTime pending_since = -1;
    sim::SimTime terminating_since = -1;
  };

  void apply(const cp::WatchEvent& ev, sim::SimTime now) {
    if (ev.type == cp::WatchEvent::Type::deleted) {
      objects_.erase(ev.key);
      meta_.erase(ev.key);
      return;
    }
    if (!ev.instance) return;
    store(*ev.instance, now);
  }

  // Re-list path: replaces one kind wholesale, keeping phase clocks of
  // objects that are still present.
  void replace_kind(const std::string& kind, const std::vector<model::ResourceInstance>& items,
                    sim::SimTime now) {
    for (auto it = objects_.begin(); it != objects_.end();) {
      if (it->first.kind == kind) {
        bool still_there = false;
        for (const auto& inst : items) {
          if (inst.key() == it->first) {
            still_there = true;
            break;
          }
        }
        if (!still_there) {
          meta_.erase(it->first);
          it = objects_.erase(it);
          continue;
        }
      }
      ++it;
    }
    for (const auto& inst : items) store(inst, now);
  }

  const model::ResourceInstance* get(const model::ResourceKey& key) const {
    auto it = objects_.find(key);
    return it == objects_.end() ? nullptr : &it->second;
  }

  std::vector<const model::ResourceInstance*> list(const std::string& kind,
                                                   const std::string& ns = "") const {
    std::vector<const model::ResourceInstance*> out;
    for (const auto& [key, inst] : objects_) {
      if (key.kind != kind) continue;
      if (!ns.empty() && key.ns != ns) continue;
      out.push_back(&inst);
    }
    return out;
  }

  const Meta* meta(const model::ResourceKey& key) const {
    auto it = meta_.find(key);
    return it == meta_.end() ? nullptr : &it->second;
  }

  bool has(const model::ResourceKey& key) const { return objects_.count(key) > 0; }
  std::size_t size() const { return objects_.size(); }

  void clear() {
    objects_.clear();
    meta_.clear();
  }

 private:
  void store(const model::ResourceInstance& inst, sim::SimTime now) {
    const model::ResourceKey key = inst.key();
    Meta& m = meta_[key];
    if (m.first_seen < 0) m.first_seen = now;
    if (key.kind == "Pod") {
      const std::string phase = inst.phase();
      if (phase == "Pending" || phase.empty()) {
        if (m.pending_since < 0) m.pending_since = now;
      } else {
        m.pending_since = -1;
      }
      if (phase == "Terminating") {
        if (m.terminating_since < 0) m.terminating_since = now;
      } else {
        m.terminating_since = -1;
      }
    }
    objects_.insert_or_assign(key, inst);
  }

  std::map<model::ResourceKey, model::ResourceInstance> objects_;
  std::map<model::ResourceKey, Meta> meta_;
};

}  // namespace orchsim::ctrl
