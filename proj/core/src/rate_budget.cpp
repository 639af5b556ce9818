#include "smapi/rate_budget.hpp"

#include "smapi/errors.hpp"

namespace smapi {

RateBudget::RateBudget(std::size_t capacity, std::int64_t window_ms, const Clock& clock)
    : capacity_(capacity), window_ms_(window_ms), clock_(clock), tokens_(capacity) {
    if (window_ms_ <= 0) throw ConfigError("rate budget window must be positive");
    std::int64_t now = clock_.now_ms();
    window_start_ = now - (now % window_ms_);
}

void RateBudget::refill_if_rolled(std::int64_t now) const {
    if (now >= window_start_ + window_ms_) {
        window_start_ = now - (now % window_ms_);
        tokens_ = capacity_;
    }
}

void RateBudget::consume(std::size_t n) {
    std::lock_guard lock(mu_);
    std::int64_t now = clock_.now_ms();
    refill_if_rolled(now);
    if (tokens_ < n) {
        std::int64_t retry_after = window_start_ + window_ms_ - now;
        throw QuotaExceededError("rate budget exhausted (" + std::to_string(tokens_) +
                                     " of " + std::to_string(capacity_) + " left, need " +
                                     std::to_string(n) + ")",
                                 retry_after);
    }
    tokens_ -= n;
    consumed_total_ += n;
}

std::size_t RateBudget::tokens() const {
    std::lock_guard lock(mu_);
    refill_if_rolled(clock_.now_ms());
    return tokens_;
}

std::uint64_t RateBudget::consumed_total() const {
    std::lock_guard lock(mu_);
    return consumed_total_;
}

BudgetLedger::BudgetLedger(const std::map<Platform, Limits>& limits, const Clock& clock) {
    for (Platform p : kAllPlatforms) {
        Limits l;
        if (auto it = limits.find(p); it != limits.end()) l = it->second;
        budgets_[p] = std::make_unique<RateBudget>(l.capacity, l.window_ms, clock);
    }
}

RateBudget& BudgetLedger::budget(Platform p) { return *budgets_.at(p); }

const RateBudget& BudgetLedger::budget(Platform p) const { return *budgets_.at(p); }

} // namespace smapi
