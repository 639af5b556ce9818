#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>

#include "smapi/clock.hpp"
#include "smapi/platform.hpp"

namespace smapi {

// Fixed-window token budget: `capacity` request units per window, full
// refill at each window boundary (boundaries are aligned to multiples of the
// window length). Consumption beyond the remaining tokens raises
// QuotaExceededError carrying the time until the next refill.
class RateBudget {
public:
    RateBudget(std::size_t capacity, std::int64_t window_ms, const Clock& clock);

    // Takes n units or throws QuotaExceededError; never partially consumes.
    void consume(std::size_t n);

    std::size_t tokens() const;
    std::size_t capacity() const { return capacity_; }
    std::int64_t window_ms() const { return window_ms_; }

    // total units consumed since construction (across refills)
    std::uint64_t consumed_total() const;

private:
    void refill_if_rolled(std::int64_t now) const;

    std::size_t capacity_;
    std::int64_t window_ms_;
    const Clock& clock_;

    mutable std::mutex mu_;
    mutable std::size_t tokens_;
    mutable std::int64_t window_start_;
    mutable std::uint64_t consumed_total_ = 0;
};

// One budget per platform; all consumption for a platform is totally ordered
// through its budget's lock.
class BudgetLedger {
public:
    struct Limits {
        std::size_t capacity = 10'000;
        std::int64_t window_ms = 900'000;
    };

    BudgetLedger(const std::map<Platform, Limits>& limits, const Clock& clock);

    RateBudget& budget(Platform p);
    const RateBudget& budget(Platform p) const;

    void consume(Platform p, std::size_t n) { budget(p).consume(n); }

private:
    std::map<Platform, std::unique_ptr<RateBudget>> budgets_;
};

} // namespace smapi
