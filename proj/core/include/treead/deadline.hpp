#pragma once

#include <chrono>
#include <stdexcept>

namespace treead {

class DeadlineExceeded : public std::runtime_error {
public:
    DeadlineExceeded() : std::runtime_error("deadline exceeded") {}
};

/// Installs a per-thread deadline for the lifetime of the scope. Long-running
/// loops call check_deadline() and unwind with DeadlineExceeded once the
/// deadline has passed. Scopes nest; the innermost one wins.
class DeadlineScope {
public:
    using Clock = std::chrono::steady_clock;

    explicit DeadlineScope(Clock::time_point deadline);
    ~DeadlineScope();

    DeadlineScope(const DeadlineScope&) = delete;
    DeadlineScope& operator=(const DeadlineScope&) = delete;

private:
    Clock::time_point previous_;
    bool had_previous_;
};

/// Throws DeadlineExceeded if the current thread's deadline has passed.
/// No-op when no DeadlineScope is active.
void check_deadline();

}  // namespace treead
