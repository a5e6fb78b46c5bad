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

#include <string>
#include <vector>

#include "orchsim/sim/kernel.hpp"

namespace orchsim::ctrl {

// Lease-based leadership for a single elected role. A crashing holder never
// releases the lease; its successor can only take over once the last renewal
// has aged past the lease duration. With renewals every second on a twenty
// second lease, takeover lands twenty-ish seconds after the crash.
class LeaderLease {
 public:
  LeaderLease(std::string role, sim::SimTime lease_ms) : role_(std::move(role)), lease_(lease_ms) {}

  bool try_acquire(int instance, sim::SimTime now) {
    if (holder_ != 0 && now < last_renew_ + lease_) return false;
    holder_ = instance;
    last_renew_ = now;
    elected_at_.push_back(now);
    return true;
  }

  void renew(int instance, sim::SimTime now) {
    if (holder_ == instance) last_renew_ = now;
  }

  bool held_by(int instance, sim::SimTime now) const {
    return holder_ == instance && now < last_renew_ + lease_;
  }

  const std::string& role() const { return role_; }
  const std::vector<sim::SimTime>& elections() const { return elected_at_; }

 private:
  std::string role_;
  sim::SimTime lease_;
  int holder_ = 0;  // instance number, 0 = never held
  sim::SimTime last_renew_ = 0;
  std::vector<sim::SimTime> elected_at_;
};

}  // namespace orchsim::ctrl
