#pragma once

#include <stdexcept>
#include <string>

namespace md2d {

/// A schedule cannot meet the multicast demand (zero-rate phase, no valid
/// transmitter, ...). Carries a human-readable cause naming the subset or link.
class InfeasibleScheduleError : public std::runtime_error {
  public:
    explicit InfeasibleScheduleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace md2d
