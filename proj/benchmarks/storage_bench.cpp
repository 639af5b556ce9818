#include <benchmark/benchmark.h>

#include "smapi/clock.hpp"
#include "smapi/storage.hpp"

using namespace smapi;

namespace {

ActivityPtr synthetic(std::size_t n) {
    auto a = std::make_shared<Activity>();
    a->actor.id = PlatformId(Platform::Twitter, "user");
    a->actor.displayName = "bench";
    a->actor.url = "https://example.org/u";
    a->object.id = PlatformId(Platform::Twitter, "bench-" + std::to_string(n));
    a->object.content = "payload " + std::to_string(n);
    a->object.url = "https://example.org/p";
    a->object.startTime = Timestamp{1485941447000 + static_cast<std::int64_t>(n), 0};
    return a;
}

void InsertBatch(benchmark::State& state) {
    ManualClock clock(0);
    std::size_t n = 0;
    for (auto _ : state) {
        state.PauseTiming();
        ActivityStore store(clock);
        store.create_job("bench", JobKind::Search, {}, JobState::Running);
        std::vector<ActivityPtr> batch;
        for (std::int64_t i = 0; i < state.range(0); ++i) batch.push_back(synthetic(n++));
        state.ResumeTiming();
        auto result = store.insert_activities("bench", batch);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(InsertBatch)->Arg(100)->Arg(1000)->Arg(10000);

void ReInsertDuplicates(benchmark::State& state) {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("bench", JobKind::Search, {}, JobState::Running);
    std::vector<ActivityPtr> batch;
    for (std::int64_t i = 0; i < state.range(0); ++i) batch.push_back(synthetic(i));
    store.insert_activities("bench", batch);
    for (auto _ : state) {
        auto result = store.insert_activities("bench", batch);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(ReInsertDuplicates)->Arg(1000);

void LoadPageRandomOffset(benchmark::State& state) {
    ManualClock clock(0);
    ActivityStore store(clock);
    store.create_job("bench", JobKind::Search, {}, JobState::Running);
    std::vector<ActivityPtr> batch;
    for (std::int64_t i = 0; i < state.range(0); ++i) batch.push_back(synthetic(i));
    store.insert_activities("bench", batch);
    std::size_t offset = 0;
    for (auto _ : state) {
        auto page = store.load_page("bench", 100, offset % state.range(0));
        benchmark::DoNotOptimize(page);
        offset += 7919; // stride through offsets
    }
}
BENCHMARK(LoadPageRandomOffset)->Arg(10000)->Arg(100000);

} // namespace
