#include <benchmark/benchmark.h>

#include "smapi/adapters.hpp"
#include "smapi/enrichment.hpp"
#include "smapi/fixturegen.hpp"

using namespace smapi;

namespace {

const Enricher& enricher() {
    static Enricher instance(EnrichmentConfig::load(std::string(SMAPI_DATA_DIR) + "/config"));
    return instance;
}

void EnrichActivity(benchmark::State& state) {
    auto items = fixtures::generate(Platform::Twitter, {});
    std::vector<Activity> mapped;
    for (std::size_t i = 0; i < 64; ++i) {
        mapped.push_back(map_native(Platform::Twitter, items[i]));
    }
    std::size_t i = 0;
    for (auto _ : state) {
        Activity enriched = enricher().enrich(mapped[i % mapped.size()]);
        benchmark::DoNotOptimize(enriched);
        ++i;
    }
}
BENCHMARK(EnrichActivity);

void ExtractEntities(benchmark::State& state) {
    const char* text = "RT @newsdesk24: #flood warning for the river area near berlin "
                       "https://t.co/UNlq698PIJ stay safe @helfernetz #alert";
    for (auto _ : state) {
        auto entities = extract_entities(text);
        benchmark::DoNotOptimize(entities);
    }
}
BENCHMARK(ExtractEntities);

void ContentMetrics(benchmark::State& state) {
    const char* text = "Severe flooding along the river. Emergency crews are on site! "
                       "Residents should move to higher ground immediately.";
    for (auto _ : state) {
        auto metrics = compute_content_metrics(text);
        benchmark::DoNotOptimize(metrics);
    }
}
BENCHMARK(ContentMetrics);

void MapNative(benchmark::State& state) {
    auto items = fixtures::generate(Platform::Twitter, {});
    std::size_t i = 0;
    for (auto _ : state) {
        Activity a = map_native(Platform::Twitter, items[i % items.size()]);
        benchmark::DoNotOptimize(a);
        ++i;
    }
}
BENCHMARK(MapNative);

} // namespace
