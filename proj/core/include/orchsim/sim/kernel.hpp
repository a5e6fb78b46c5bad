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
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "orchsim/jsonx.hpp"

namespace orchsim::sim {

/// Virtual time in milliseconds.
using SimTime = std::int64_t;

/// Raised when the same-instant dispatch cap is exceeded. A cluster that
/// schedules work at the current instant without ever advancing the clock is
/// in a reaction livelock; the usual cause is runaway replication.
class LivelockError : public std::runtime_error {
 public:
  LivelockError(SimTime at, std::uint64_t count)
      : std::runtime_error("livelock: " + std::to_string(count) +
                           " events dispatched at t=" + std::to_string(at) +
                           "ms without the clock advancing (runaway reaction loop)"),
        at_ms(at),
        event_count(count) {}
  SimTime at_ms;
  std::uint64_t event_count;
};

/// One line of the run trace. Wire message lines carry exactly these fields;
/// everything else in the trace is an event line (free-form keyed object).
struct TraceEntry {
  SimTime time = 0;
  std::string channel;
  std::string kind;
  std::string ns;
  std::string name;
  std::string operation;
  std::uint64_t occurrence_index = 0;
  std::string outcome;

  Json to_json() const;
};

/// Append-only run trace: one JSON object per line, stable key order.
class Trace {
 public:
  void message(const TraceEntry& e);
  /// Event lines: {"time":..,"event":..,...extra}. Extra keys keep caller order.
  void event(SimTime t, const std::string& event, const Json& extra = Json::object());

  const std::vector<Json>& lines() const { return lines_; }
  std::string render() const;
  std::string digest() const;

 private:
  std::vector<Json> lines_;
};

/// Discrete-event kernel. Events fire in (fire_time, seq) order; seq is the
/// global schedule order, which makes dispatch deterministic for equal times.
class Kernel {
 public:
  explicit Kernel(std::uint64_t seed, std::uint64_t livelock_cap = 1000000);

  SimTime now() const { return now_; }
  std::uint64_t seed() const { return seed_; }
  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }

  /// Schedules fn at now()+delay_ms (delay >= 0). Returns the event seq.
  std::uint64_t schedule(SimTime delay_ms, const std::string& target, std::function<void()> fn);
  std::uint64_t schedule_at(SimTime fire_time, const std::string& target, std::function<void()> fn);

  /// Dispatches all events with fire_time <= t_end, then advances the clock
  /// to t_end. Throws LivelockError when the same-instant cap is exceeded.
  void run_until(SimTime t_end);

  bool empty() const { return queue_.empty(); }
  std::uint64_t dispatched() const { return dispatched_; }

  /// Transaction-activity bookkeeping used by the quiescence detector.
  /// Periodic background events (heartbeats, sweeps) do not mark activity;
  /// state-changing writes do.
  void note_activity() { last_activity_ = now_; }
  SimTime last_activity() const { return last_activity_; }

 private:
  struct Event {
    SimTime fire_time;
    std::uint64_t seq;
    std::string target;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.seq > b.seq;
    }
  };

  std::uint64_t seed_;
  std::uint64_t livelock_cap_;
  SimTime now_ = 0;
  SimTime last_activity_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t dispatched_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Trace trace_;
};

}  // namespace orchsim::sim
