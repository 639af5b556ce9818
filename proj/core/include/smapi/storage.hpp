#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "smapi/activity.hpp"
#include "smapi/clock.hpp"
#include "smapi/platform.hpp"

namespace smapi {

enum class JobKind { Search, Crawl };
enum class JobState { Pending, Running, Completed, Failed, Cancelled };

std::string_view to_string(JobKind k);
std::string_view to_string(JobState s);

struct JobCounters {
    std::uint64_t gathered = 0;
    std::uint64_t deduplicated = 0;
    std::uint64_t skipped = 0;
    std::map<Platform, std::uint64_t> requestUnitsUsed;
};

struct JobRecord {
    std::string jobId;
    JobKind kind = JobKind::Search;
    nlohmann::json spec; // stored request
    JobState state = JobState::Pending;
    std::int64_t createdAt_ms = 0;
    std::int64_t lastTickAt_ms = 0; // 0 until the first gathering round
    JobCounters counters;
    std::vector<std::string> diagnostics;
};

nlohmann::json job_to_json(const JobRecord& record, bool include_spec = true);

struct InsertResult {
    std::size_t inserted = 0;
    std::size_t duplicates = 0;
};

struct LoadByIdsResult {
    ActivityCollection collection;
    std::vector<std::string> missing;
};

// Document store with a compound-unique key on (platform, native_id).
// Activities are shared across jobs through per-job membership sets; the
// global page order is (startTime, canonical id) ascending. Backed by memory
// plus an optional append-only JSONL log replayed at startup; the key index
// and documents stay in memory for serving.
class ActivityStore {
public:
    explicit ActivityStore(const Clock& clock, std::filesystem::path log_path = {});

    JobRecord create_job(std::string jobId, JobKind kind, nlohmann::json spec,
                         JobState initial = JobState::Pending);
    JobRecord job(const std::string& jobId) const;
    std::vector<JobRecord> list_jobs() const; // createdAt descending

    // pending -> running -> {completed, failed, cancelled}; stop may cancel
    // a pending job directly. Invalid transitions raise ConflictError.
    JobRecord set_state(const std::string& jobId, JobState state);
    void record_tick(const std::string& jobId, std::int64_t tick_ms);
    void add_counts(const std::string& jobId, std::uint64_t gathered,
                    std::uint64_t deduplicated, std::uint64_t skipped);
    void add_request_units(const std::string& jobId, Platform p, std::uint64_t units);
    void add_diagnostic(const std::string& jobId, std::string message);

    // New keys are persisted, known keys are linked to the job without a
    // rewrite. inserted + duplicates equals the batch size after intra-batch
    // dedup. Also bumps gathered/deduplicated on the job record.
    InsertResult insert_activities(const std::string& jobId,
                                   const std::vector<ActivityPtr>& batch);

    ActivityCollection load_page(const std::string& jobId, std::size_t count,
                                 std::size_t offset) const;
    LoadByIdsResult load_by_ids(const std::vector<std::string>& ids) const;

    // Removes the job and every activity no other job references; returns
    // how many activities were dropped. Running jobs must be stopped first.
    std::size_t delete_job(const std::string& jobId);

    std::size_t total_activities() const;
    std::size_t job_activity_count(const std::string& jobId) const;
    std::optional<std::int64_t> newest_start_ms(const std::string& jobId) const;

    // Rewrites the log to current state, dropping superseded records.
    void compact();

private:
    using OrderKey = std::pair<std::int64_t, std::string>; // (startTime, id)

    struct JobEntry {
        JobRecord record;
        std::set<OrderKey> members;
    };

    JobEntry& entry(const std::string& jobId);
    const JobEntry& entry(const std::string& jobId) const;
    void log_line(const nlohmann::json& op);
    void log_job(const JobRecord& record);
    void replay(const std::filesystem::path& path);

    const Clock& clock_;
    std::filesystem::path log_path_;
    std::ofstream log_;

    mutable std::shared_mutex mu_;
    std::map<OrderKey, ActivityPtr> ordered_;
    std::unordered_map<std::string, OrderKey> key_index_;
    std::unordered_map<std::string, std::set<std::string>> key_jobs_;
    std::map<std::string, JobEntry> jobs_;
};

} // namespace smapi
