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

#include "orchsim/sim/kernel.hpp"

namespace orchsim::sim {

Json TraceEntry::to_json() const {
  Json j;
  j["time"] = time;
  j["channel"] = channel;
  j["kind"] = kind;
  j["namespace"] = ns;
  j["name"] = name;
  j["operation"] = operation;
  j["occurrence_index"] = occurrence_index;
  j["outcome"] = outcome;
  return j;
}

void Trace::message(const TraceEntry& e) { lines_.push_back(e.to_json()); }

void Trace::event(SimTime t, const std::string& event, const Json& extra) {
  Json j;
  j["time"] = t;
  j["event"] = event;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  lines_.push_back(std::move(j));
}

std::string Trace::render() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l.dump();
    out += '\n';
  }
  return out;
}

std::string Trace::digest() const { return digest_hex(render()); }

Kernel::Kernel(std::uint64_t seed, std::uint64_t livelock_cap)
    : seed_(seed), livelock_cap_(livelock_cap) {}

std::uint64_t Kernel::schedule(SimTime delay_ms, const std::string& target,
                               std::function<void()> fn) {
  return schedule_at(now_ + delay_ms, target, std::move(fn));
}

std::uint64_t Kernel::schedule_at(SimTime fire_time, const std::string& target,
                                  std::function<void()> fn) {
  if (fire_time < now_) fire_time = now_;
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{fire_time, seq, target, std::move(fn)});
  return seq;
}

void Kernel::run_until(SimTime t_end) {
  SimTime instant = -1;
  std::uint64_t at_instant = 0;
  while (!queue_.empty() && queue_.top().fire_time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.fire_time;
    if (now_ == instant) {
      if (++at_instant > livelock_cap_) throw LivelockError(now_, at_instant);
    } else {
      instant = now_;
      at_instant = 1;
    }
    ++dispatched_;
    ev.fn();
  }
  if (t_end > now_) now_ = t_end;
}

}  // namespace orchsim::sim
