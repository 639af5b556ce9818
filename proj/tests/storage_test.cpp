#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <thread>

#include "smapi/errors.hpp"
#include "smapi/storage.hpp"
#include "support/test_support.hpp"

using namespace smapi;

namespace {

std::vector<ActivityPtr> batch_of(std::size_t n, std::size_t offset = 0,
                                  Platform p = Platform::Twitter) {
    std::vector<ActivityPtr> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(testing::make_activity_ptr(
            "item-" + std::to_string(offset + i), "content " + std::to_string(offset + i),
            1485941447000 + static_cast<std::int64_t>(offset + i) * 1000, p));
    }
    return out;
}

} // namespace

TEST_CASE("insert dedup against the store and within batches") {
    ManualClock clock(1000);
    ActivityStore store(clock);
    store.create_job("job-a", JobKind::Search, {}, JobState::Running);

    auto fresh = store.insert_activities("job-a", batch_of(10));
    CHECK(fresh.inserted == 10);
    CHECK(fresh.duplicates == 0);

    auto again = store.insert_activities("job-a", batch_of(10));
    CHECK(again.inserted == 0);
    CHECK(again.duplicates == 10);
    CHECK(store.total_activities() == 10);

    auto twice = batch_of(1, 100);
    twice.push_back(twice.front());
    auto intra = store.insert_activities("job-a", twice);
    CHECK(intra.inserted == 1);
    CHECK(intra.duplicates == 0);

    JobRecord record = store.job("job-a");
    CHECK(record.counters.gathered == 21);
    CHECK(record.counters.deduplicated == 10);
}

TEST_CASE("pages are deterministic, disjoint and exhaustive") {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("job-p", JobKind::Search, {}, JobState::Running);
    store.insert_activities("job-p", batch_of(25));

    auto remainder = store.load_page("job-p", 10, 20);
    CHECK(remainder.items.size() == 5);
    CHECK(remainder.totalItems == 5);

    auto past_end = store.load_page("job-p", 10, 9999);
    CHECK(past_end.items.empty());
    CHECK(past_end.totalItems == 0);

    // concatenated pages equal one big load
    std::vector<std::string> concat;
    for (std::size_t offset = 0; offset < 25; offset += 10) {
        for (const auto& a : store.load_page("job-p", 10, offset).items) {
            concat.push_back(a->canonical_id());
        }
    }
    std::vector<std::string> whole;
    auto full = store.load_page("job-p", 30, 0);
    for (const auto& a : full.items) whole.push_back(a->canonical_id());
    CHECK(concat == whole);

    // global order: startTime ascending then id
    for (std::size_t i = 1; i < full.items.size(); ++i) {
        auto prev = std::pair(full.items[i - 1]->start_epoch_ms(),
                              full.items[i - 1]->canonical_id());
        auto cur = std::pair(full.items[i]->start_epoch_ms(), full.items[i]->canonical_id());
        CHECK(prev < cur);
    }

    CHECK_THROWS_AS((void)store.load_page("nope", 10, 0), NotFoundError);
}

TEST_CASE("load_by_ids preserves request order and reports missing") {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("job-i", JobKind::Search, {}, JobState::Running);
    store.insert_activities("job-i", batch_of(3));

    auto none = store.load_by_ids({});
    CHECK(none.collection.items.empty());
    CHECK(none.missing.empty());

    auto mixed = store.load_by_ids(
        {"twitter:item-2", "twitter:item-0", "twitter:unknown-9"});
    REQUIRE(mixed.collection.items.size() == 2);
    CHECK(mixed.collection.items[0]->canonical_id() == "twitter:item-2");
    CHECK(mixed.collection.items[1]->canonical_id() == "twitter:item-0");
    CHECK(mixed.missing == std::vector<std::string>{"twitter:unknown-9"});
}

TEST_CASE("delete_job removes only exclusively-owned activities") {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("sole", JobKind::Search, {}, JobState::Running);
    store.insert_activities("sole", batch_of(10));
    store.set_state("sole", JobState::Completed);
    CHECK(store.delete_job("sole") == 10);
    CHECK(store.total_activities() == 0);

    store.create_job("left", JobKind::Search, {}, JobState::Running);
    store.create_job("right", JobKind::Search, {}, JobState::Running);
    store.insert_activities("left", batch_of(10));
    store.insert_activities("right", batch_of(10)); // fully shared
    store.set_state("left", JobState::Completed);
    CHECK(store.delete_job("left") == 0);
    CHECK(store.total_activities() == 10);

    store.create_job("partial", JobKind::Search, {}, JobState::Running);
    store.insert_activities("partial", batch_of(10, 5)); // 5 shared with "right"
    store.set_state("partial", JobState::Completed);
    CHECK(store.delete_job("partial") == 5);

    store.create_job("busy", JobKind::Crawl, {}, JobState::Running);
    CHECK_THROWS_AS((void)store.delete_job("busy"), ConflictError);
    CHECK_THROWS_AS((void)store.delete_job("ghost"), NotFoundError);
}

TEST_CASE("job state machine") {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("j", JobKind::Crawl, {});
    CHECK(store.job("j").state == JobState::Pending);
    store.set_state("j", JobState::Running);
    store.set_state("j", JobState::Completed);
    CHECK_THROWS_AS((void)store.set_state("j", JobState::Running), ConflictError);

    store.create_job("k", JobKind::Crawl, {});
    store.set_state("k", JobState::Cancelled); // stop before start
    CHECK(store.job("k").state == JobState::Cancelled);
    CHECK_THROWS_AS((void)store.create_job("k", JobKind::Crawl, {}), ConflictError);
}

TEST_CASE("list_jobs orders by creation time descending") {
    ManualClock clock(1000);
    ActivityStore store(clock);
    store.create_job("old", JobKind::Search, {});
    clock.set(2000);
    store.create_job("new", JobKind::Crawl, {});
    auto jobs = store.list_jobs();
    REQUIRE(jobs.size() == 2);
    CHECK(jobs[0].jobId == "new");
    CHECK(jobs[1].jobId == "old");
}

TEST_CASE("concurrent inserts keep the compound key unique") {
    ManualClock clock(0);
    ActivityStore store(clock);
    const int jobs = 8;
    for (int j = 0; j < jobs; ++j) {
        store.create_job("job-" + std::to_string(j), JobKind::Crawl, {}, JobState::Running);
    }
    // every job inserts overlapping slices of the same 200 keys
    std::vector<std::thread> workers;
    for (int j = 0; j < jobs; ++j) {
        workers.emplace_back([&store, j] {
            for (int round = 0; round < 5; ++round) {
                store.insert_activities("job-" + std::to_string(j),
                                        batch_of(100, static_cast<std::size_t>(j * 10)));
            }
        });
    }
    for (auto& w : workers) w.join();

    // distinct keys: offsets 0..70+99 -> 170 distinct items
    CHECK(store.total_activities() == 170);

    // full scan: no two stored activities share (platform, native_id)
    std::set<std::string> seen;
    auto all = store.load_page("job-0", 1000, 0);
    for (const auto& a : all.items) CHECK(seen.insert(a->canonical_id()).second);
}

TEST_CASE("file-backed log replays to the same state") {
    auto dir = testing::temp_dir("storage");
    auto path = dir / "store.jsonl";
    ManualClock clock(5000);
    {
        ActivityStore store(clock, path);
        store.create_job("persisted", JobKind::Search,
                         nlohmann::json{{"keyword", "fire"}}, JobState::Running);
        store.insert_activities("persisted", batch_of(12));
        store.set_state("persisted", JobState::Completed);
        store.add_request_units("persisted", Platform::Twitter, 3);
    }
    {
        ActivityStore reopened(clock, path);
        CHECK(reopened.total_activities() == 12);
        JobRecord record = reopened.job("persisted");
        CHECK(record.state == JobState::Completed);
        CHECK(record.counters.gathered == 12);
        CHECK(record.counters.requestUnitsUsed.at(Platform::Twitter) == 3);
        CHECK(reopened.load_page("persisted", 100, 0).items.size() == 12);

        reopened.compact();
    }
    {
        ActivityStore after_compact(clock, path);
        CHECK(after_compact.total_activities() == 12);
        CHECK(after_compact.load_page("persisted", 100, 0).items.size() == 12);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("counters never decrease") {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("c", JobKind::Crawl, {}, JobState::Running);
    store.insert_activities("c", batch_of(5));
    auto before = store.job("c").counters;
    store.insert_activities("c", batch_of(5)); // all duplicates
    store.add_counts("c", 0, 0, 2);
    auto after = store.job("c").counters;
    CHECK(after.gathered >= before.gathered);
    CHECK(after.deduplicated >= before.deduplicated);
    CHECK(after.skipped == 2);
    CHECK(after.gathered == 10);
}
