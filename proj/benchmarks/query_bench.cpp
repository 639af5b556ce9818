#include <benchmark/benchmark.h>

#include "smapi/adapters.hpp"
#include "smapi/query.hpp"
#include "smapi/query_plan.hpp"

using namespace smapi;

namespace {

const char* kQuery = "fire AND (berlin OR hamburg OR munich) NOT drill";
const char* kDocument =
    "Severe fire reported near the berlin central station, crews responding. "
    "No drill announcement has been made so far, please avoid the area.";

void ParseQuery(benchmark::State& state) {
    for (auto _ : state) {
        QueryPtr ast = parse_query(kQuery);
        benchmark::DoNotOptimize(ast);
    }
}
BENCHMARK(ParseQuery);

void ToDnf(benchmark::State& state) {
    QueryPtr ast = parse_query(kQuery);
    for (auto _ : state) {
        Dnf dnf = to_dnf(ast);
        benchmark::DoNotOptimize(dnf);
    }
}
BENCHMARK(ToDnf);

void EvaluateMatch(benchmark::State& state) {
    QueryPtr ast = parse_query(kQuery);
    for (auto _ : state) {
        bool hit = evaluate_match(ast, kDocument);
        benchmark::DoNotOptimize(hit);
    }
}
BENCHMARK(EvaluateMatch);

void RewriteAllProfiles(benchmark::State& state) {
    Dnf dnf = to_dnf(parse_query(kQuery));
    for (auto _ : state) {
        for (Platform p : kAllPlatforms) {
            RewritePlan plan = rewrite_for_platform(dnf, default_capabilities(p));
            benchmark::DoNotOptimize(plan);
        }
    }
}
BENCHMARK(RewriteAllProfiles);

} // namespace
