#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "sliceguard/tunnel/session.hpp"

namespace sliceguard::netem {

using tunnel::SimTime;  // nanoseconds
using tunnel::kMillisecond;
using tunnel::kSecond;
constexpr SimTime kMicrosecond = 1'000;

inline SimTime ms_to_sim(double ms) {
  return SimTime(llround(ms * double(kMillisecond)));
}

enum class ClockMode { virtual_time, realtime };

class Clock {
 public:
  explicit Clock(ClockMode mode = ClockMode::virtual_time) : mode_(mode) {
    if (mode_ == ClockMode::realtime) epoch_ = std::chrono::steady_clock::now();
  }

  ClockMode mode() const { return mode_; }

  SimTime now() const {
    if (mode_ == ClockMode::realtime) {
      auto d = std::chrono::steady_clock::now() - epoch_;
      return std::chrono::duration_cast<std::chrono::nanoseconds>(d).count();
    }
    return now_;
  }

  double now_us() const { return double(now()) / 1000.0; }

  void advance_to(SimTime t) {
    if (mode_ != ClockMode::virtual_time)
      throw std::logic_error("advance_to requires a virtual clock");
    if (t < now_) throw std::logic_error("clock may not move backwards");
    now_ = t;
  }

 private:
  ClockMode mode_;
  SimTime now_ = 0;
  std::chrono::steady_clock::time_point epoch_;
};

}  // namespace sliceguard::netem
