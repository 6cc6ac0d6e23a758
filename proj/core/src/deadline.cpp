#include "treead/deadline.hpp"

namespace treead {
namespace {

thread_local bool t_active = false;
thread_local DeadlineScope::Clock::time_point t_deadline{};

}  // namespace

DeadlineScope::DeadlineScope(Clock::time_point deadline)
    : previous_(t_deadline), had_previous_(t_active) {
    t_deadline = deadline;
    t_active = true;
}

DeadlineScope::~DeadlineScope() {
    t_deadline = previous_;
    t_active = had_previous_;
}

void check_deadline() {
    if (t_active && DeadlineScope::Clock::now() >= t_deadline) {
        throw DeadlineExceeded();
    }
}

}  // namespace treead
