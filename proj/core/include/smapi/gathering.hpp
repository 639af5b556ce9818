#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smapi/adapters.hpp"
#include "smapi/clock.hpp"
#include "smapi/enrichment.hpp"
#include "smapi/rate_budget.hpp"
#include "smapi/storage.hpp"

namespace smapi {

struct SearchRequest {
    std::string keyword;
    std::vector<Platform> platforms;
    std::optional<std::int64_t> since_s; // epoch seconds, inclusive
    std::optional<std::int64_t> until_s;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::optional<double> radius_km;
};

struct CrawlJobSpec {
    std::string keyword;
    std::vector<Platform> platforms;
    std::int64_t waitBetweenRequests_ms = 10000;
    std::optional<std::int64_t> start_s;
    std::optional<std::int64_t> end_s;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::optional<double> radius_km;
};

struct PlatformOutcome {
    Platform platform = Platform::Twitter;
    bool skipped = false;   // query not expressible on this platform
    bool truncated = false; // quota ran out mid-gather
    std::string diagnostic;
    std::size_t requestUnits = 0;
    std::size_t fetched = 0;
    std::size_t mappingErrors = 0;
    std::size_t matched = 0;
    std::size_t inserted = 0;
    std::size_t duplicates = 0;
};

struct SearchOutcome {
    std::string jobId;
    ActivityCollection collection;
    std::vector<PlatformOutcome> platforms;

    bool any_truncated() const {
        for (const auto& o : platforms) {
            if (o.truncated) return true;
        }
        return false;
    }
};

struct GatheringOptions {
    // applied when latitude/longitude arrive without a radius
    double default_radius_km = 10.0;
};

// Runs one-time searches and interval crawl jobs: plan per platform, fetch
// under quota, map, post-filter, enrich, and store with dedup. Search
// results are kept as completed job records so they stay loadable by id.
class GatheringService {
public:
    GatheringService(const AdapterRegistry& adapters, BudgetLedger& budgets,
                     ActivityStore& store, const Enricher& enricher, const Clock& clock,
                     GatheringOptions options = {});

    SearchOutcome run_search(const SearchRequest& request);

    std::string start_crawl(const CrawlJobSpec& spec);

    // One gathering round, restricted to items newer than the job's newest
    // stored startTime minus one interval. No-op when the job is not due,
    // not started yet, or finished; flips the state to completed once the
    // clock passes the configured end.
    JobRecord crawl_tick(const std::string& jobId);

    // Ticks every due crawl job; returns how many rounds ran.
    std::size_t tick_due_jobs();

    JobRecord stop_crawl(const std::string& jobId);
    JobRecord job_status(const std::string& jobId) const;
    std::vector<JobRecord> list_jobs() const;

    // Throw InvalidRequestError carrying per-field messages.
    static void validate(const SearchRequest& request);
    static void validate(const CrawlJobSpec& spec);

    static nlohmann::json spec_to_json(const SearchRequest& request);
    static nlohmann::json spec_to_json(const CrawlJobSpec& spec);

    static std::string derive_job_id(const nlohmann::json& spec, std::int64_t created_ms,
                                     std::uint64_t nonce);

private:
    std::optional<GeoCircle> circle_of(const std::optional<double>& lat,
                                       const std::optional<double>& lon,
                                       const std::optional<double>& radius_km) const;

    PlatformOutcome gather_platform(const std::string& jobId, Platform platform,
                                    const Dnf& dnf,
                                    const std::optional<GeoCircle>& geo,
                                    const std::optional<TimeWindow>& window);

    const AdapterRegistry& adapters_;
    BudgetLedger& budgets_;
    ActivityStore& store_;
    const Enricher& enricher_;
    const Clock& clock_;
    GatheringOptions options_;
    std::atomic<std::uint64_t> nonce_{0};
    std::mutex tick_mu_; // a job's ticks never overlap
};

} // namespace smapi
