#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace fracsched {

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// More links than the 128-bit link sets can hold.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Feasible-matching enumeration passed its configured ceiling.
class MatchingOverflow : public std::runtime_error {
public:
    explicit MatchingOverflow(std::uint64_t limit)
        : std::runtime_error("more than " + std::to_string(limit) + " feasible matchings"),
          limit_(limit) {}
    [[nodiscard]] std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t limit_;
};

/// A wall-clock or state budget ran out before an exact answer was reached.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Optional wall-clock limit shared by the long-running solvers. A
/// default-constructed deadline never expires.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(std::chrono::duration<double> budget)
        : end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget)) {}

    [[nodiscard]] bool expired() const { return end_ && Clock::now() >= *end_; }

    /// Cheap enough to call in inner loops: the clock is read every 4096 calls.
    void poll(const char* where) const {
        if (!end_) return;
        if ((++calls_ & 0xFFFu) != 0) return;
        if (Clock::now() >= *end_) throw BudgetExceeded(std::string("time budget exhausted in ") + where);
    }

private:
    std::optional<Clock::time_point> end_;
    mutable std::uint64_t calls_ = 0;
};

}  // namespace fracsched
