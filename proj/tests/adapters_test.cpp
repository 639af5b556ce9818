#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smapi/adapters.hpp"
#include "smapi/clock.hpp"
#include "smapi/errors.hpp"
#include "smapi/fixturegen.hpp"
#include "smapi/rate_budget.hpp"
#include "support/test_support.hpp"

using namespace smapi;

namespace {

std::shared_ptr<FixtureCorpus> corpus_with_matches(Platform p, std::size_t matching,
                                                   std::size_t noise) {
    std::vector<NativeItem> items;
    for (std::size_t i = 0; i < matching; ++i) {
        items.push_back(fixtures::plain_item(p, "m" + std::to_string(i),
                                             "wildfire fire alert number " + std::to_string(i),
                                             Timestamp{1485941447000 + (std::int64_t)i * 1000, 0}));
    }
    for (std::size_t i = 0; i < noise; ++i) {
        items.push_back(fixtures::plain_item(p, "n" + std::to_string(i),
                                             "calm weather report " + std::to_string(i),
                                             Timestamp{1485941447000 + (std::int64_t)i * 1000, 0}));
    }
    return std::make_shared<FixtureCorpus>(std::move(items));
}

} // namespace

TEST_CASE("capability profile table") {
    CHECK(default_capabilities(Platform::Twitter).nativeGeoFilter);
    CHECK(default_capabilities(Platform::Twitter).nativeTimeFilter);
    CHECK(default_capabilities(Platform::YouTube).nativeGeoFilter);
    CHECK_FALSE(default_capabilities(Platform::GooglePlus).nativeGeoFilter);
    CHECK_FALSE(default_capabilities(Platform::GooglePlus).nativeTimeFilter);

    auto facebook = default_capabilities(Platform::Facebook);
    CHECK(facebook.operators == std::set<QueryOperator>{QueryOperator::And});
    CHECK(facebook.nativeTimeFilter);
    CHECK_FALSE(facebook.nativeGeoFilter);

    auto instagram = default_capabilities(Platform::Instagram);
    CHECK_FALSE(instagram.keywordSearch);
    CHECK(instagram.operators.empty());
}

TEST_CASE("rate budget consume and refill") {
    ManualClock clock(100);
    RateBudget budget(180, 1000, clock);

    budget.consume(1);
    CHECK(budget.tokens() == 179);

    budget.consume(179);
    CHECK(budget.tokens() == 0);
    try {
        budget.consume(1);
        FAIL("expected quota error");
    } catch (const QuotaExceededError& e) {
        // window [0, 1000) at t=100: 900 ms until refill
        CHECK(e.retry_after_ms() == 900);
    }

    clock.set(1000); // window boundary: full refill
    CHECK(budget.tokens() == 180);
    budget.consume(2);
    CHECK(budget.tokens() == 178);
    CHECK(budget.consumed_total() == 182);
}

TEST_CASE("budget ledger serializes per-platform consumption") {
    ManualClock clock(0);
    BudgetLedger ledger({{Platform::Twitter, {5, 60'000}}}, clock);
    ledger.consume(Platform::Twitter, 5);
    CHECK_THROWS_AS(ledger.consume(Platform::Twitter, 1), QuotaExceededError);
    // other platforms run on the default limits
    CHECK_NOTHROW(ledger.consume(Platform::Facebook, 1));
}

TEST_CASE("fetch_page pages deterministically") {
    auto corpus = corpus_with_matches(Platform::Twitter, 25, 10);
    PlatformCapabilities caps = default_capabilities(Platform::Twitter);
    caps.maxResultsPerRequest = 10;
    FixtureAdapter adapter(Platform::Twitter, caps, corpus);

    NativeRequest request{"fire", 0, std::nullopt, std::nullopt};
    Page p1 = adapter.fetch_page(request);
    REQUIRE(p1.items.size() == 10);
    REQUIRE(p1.next.has_value());
    Page p2 = adapter.fetch_page(request, p1.next);
    REQUIRE(p2.items.size() == 10);
    REQUIRE(p2.next.has_value());
    Page p3 = adapter.fetch_page(request, p2.next);
    CHECK(p3.items.size() == 5);
    CHECK_FALSE(p3.next.has_value());

    // identical (corpus, request, cursor) triples yield identical pages
    Page p1_again = adapter.fetch_page(request);
    CHECK(p1.items == p1_again.items);

    Page none = adapter.fetch_page({"absentword", 0, std::nullopt, std::nullopt});
    CHECK(none.items.empty());
    CHECK_FALSE(none.next.has_value());
}

TEST_CASE("page size never exceeds the platform limit") {
    auto corpus = corpus_with_matches(Platform::Twitter, 40, 0);
    PlatformCapabilities caps = default_capabilities(Platform::Twitter);
    caps.maxResultsPerRequest = 7;
    FixtureAdapter adapter(Platform::Twitter, caps, corpus);
    NativeRequest request{"fire", 0, std::nullopt, std::nullopt};
    std::optional<PageCursor> cursor;
    std::size_t total = 0;
    for (;;) {
        Page page = adapter.fetch_page(request, cursor);
        CHECK(page.items.size() <= 7);
        total += page.items.size();
        if (!page.next) break;
        cursor = page.next;
    }
    CHECK(total == 40);
}

TEST_CASE("adapters reject requests beyond their capabilities") {
    FixtureAdapter facebook(Platform::Facebook, default_capabilities(Platform::Facebook),
                            corpus_with_matches(Platform::Facebook, 3, 0));
    CHECK_THROWS_AS((void)facebook.fetch_page({"a OR b", 0, std::nullopt, std::nullopt}),
                    CapabilityError);
    CHECK_THROWS_AS((void)facebook.fetch_page({"\"a b\"", 0, std::nullopt, std::nullopt}),
                    CapabilityError);
    CHECK_NOTHROW((void)facebook.fetch_page({"fire alert", 0, std::nullopt, std::nullopt}));

    FixtureAdapter instagram(Platform::Instagram, default_capabilities(Platform::Instagram),
                             corpus_with_matches(Platform::Instagram, 3, 0));
    CHECK_THROWS_AS((void)instagram.fetch_page({"two tags", 0, std::nullopt, std::nullopt}),
                    CapabilityError);

    // native geo on a platform without native geo filtering is a plan bug
    FixtureAdapter gplus(Platform::GooglePlus, default_capabilities(Platform::GooglePlus),
                         corpus_with_matches(Platform::GooglePlus, 3, 0));
    CHECK_THROWS_AS((void)gplus.fetch_page(
                        {"fire", 0, GeoCircle{52.0, 13.0, 5.0}, std::nullopt}),
                    CapabilityError);
}

TEST_CASE("unknown cursors are refused") {
    FixtureAdapter adapter(Platform::Twitter, default_capabilities(Platform::Twitter),
                           corpus_with_matches(Platform::Twitter, 5, 0));
    CHECK_THROWS_AS((void)adapter.fetch_page({"fire", 0, std::nullopt, std::nullopt},
                                             PageCursor{"deadbeef:10"}),
                    InvalidRequestError);
    // cursor from one request cannot continue another
    NativeRequest first{"fire", 0, std::nullopt, std::nullopt};
    PlatformCapabilities caps = default_capabilities(Platform::Twitter);
    caps.maxResultsPerRequest = 2;
    FixtureAdapter paged(Platform::Twitter, caps, corpus_with_matches(Platform::Twitter, 5, 0));
    auto page = paged.fetch_page(first);
    REQUIRE(page.next.has_value());
    CHECK_THROWS_AS((void)paged.fetch_page({"alert", 0, std::nullopt, std::nullopt}, page.next),
                    InvalidRequestError);
}

TEST_CASE("tag-only adapters match the tag list") {
    std::vector<NativeItem> items;
    items.push_back(fixtures::plain_item(Platform::Instagram, "1", "#fire #berlin",
                                         Timestamp{1485941447000, 0}, std::nullopt,
                                         {"fire", "berlin"}));
    items.push_back(fixtures::plain_item(Platform::Instagram, "2", "#flood",
                                         Timestamp{1485941448000, 0}, std::nullopt, {"flood"}));
    FixtureAdapter adapter(Platform::Instagram, default_capabilities(Platform::Instagram),
                           std::make_shared<FixtureCorpus>(std::move(items)));
    CHECK(adapter.fetch_page({"fire", 0, std::nullopt, std::nullopt}).items.size() == 1);
    CHECK(adapter.fetch_page({"FIRE", 0, std::nullopt, std::nullopt}).items.size() == 1);
    CHECK(adapter.fetch_page({"berlin", 0, std::nullopt, std::nullopt}).items.size() == 1);
    CHECK(adapter.fetch_page({"storm", 0, std::nullopt, std::nullopt}).items.empty());
}

TEST_CASE("map_native normalizes the twitter schema") {
    NativeItem item = fixtures::plain_item(Platform::Twitter, "823724465664883940",
                                           "RT fire in town", Timestamp{1485941447000, 60},
                                           std::pair{50.78506988, 8.00512706});
    item["retweet_count"] = 3;
    item["favorite_count"] = 14;

    Activity a = map_native(Platform::Twitter, item);
    CHECK(a.object.id.str() == "twitter:823724465664883940");
    CHECK(a.object.content == "RT fire in town");
    REQUIRE(a.object.startTime.has_value());
    CHECK(a.object.startTime->epoch_ms == 1485941447000);
    CHECK(a.object.startTime->offset_minutes == 60);
    REQUIRE(a.object.location.has_value());
    CHECK(a.object.location->latitude == doctest::Approx(50.78506988));
    REQUIRE(a.object.enrichedData.has_value());
    CHECK(*a.object.enrichedData->numRetweets == 3);
    CHECK(*a.object.enrichedData->numLikes == 14);
    CHECK(a.object.enrichedData->extensions["numFollowers"] == 10);
    CHECK(a.object.extensions["nativeData"] == item);
    CHECK(validate_activity(a).ok());

    NativeItem no_geo = fixtures::plain_item(Platform::Twitter, "99", "quiet",
                                             Timestamp{1485941447000, 0});
    CHECK_FALSE(map_native(Platform::Twitter, no_geo).object.location.has_value());
}

TEST_CASE("map_native rejects records without id or timestamp") {
    NativeItem missing_id = {{"text", "hello"}, {"created_at", "Wed Feb 01 10:30:47 +0100 2017"}};
    CHECK_THROWS_AS((void)map_native(Platform::Twitter, missing_id), SchemaError);

    NativeItem missing_time = {{"id_str", "1"}, {"text", "hello"}};
    CHECK_THROWS_AS((void)map_native(Platform::Twitter, missing_time), SchemaError);

    NativeItem bad_time = {{"id_str", "1"}, {"text", "x"}, {"created_at", "soon"}};
    CHECK_THROWS_AS((void)map_native(Platform::Twitter, bad_time), SchemaError);
}

TEST_CASE("per-platform timestamp formats normalize to the same instant") {
    Timestamp t{1485941447000, 0};
    for (Platform p : kAllPlatforms) {
        NativeItem item = fixtures::plain_item(p, "77", "fire", t);
        Activity a = map_native(p, item);
        REQUIRE(a.object.startTime.has_value());
        CHECK(a.object.startTime->epoch_ms == t.epoch_ms);
    }
}

TEST_CASE("mapping totality and validity over the shipped fixtures") {
    auto registry = AdapterRegistry::load_fixture_dir(testing::fixture_dir());
    for (Platform p : kAllPlatforms) {
        const auto& corpus = registry.adapter(p).corpus();
        REQUIRE(corpus->size() >= 500);
        for (const auto& item : corpus->snapshot()) {
            Activity a = map_native(p, item); // throws on any unmappable record
            auto validation = validate_activity(a);
            if (!validation.ok()) {
                CAPTURE(a.object.id.str());
                CAPTURE(validation.violations.front().field);
                FAIL("shipped fixture maps to an invalid activity");
            }
        }
    }
}

TEST_CASE("quota ledger conservation across fetches") {
    ManualClock clock(0);
    RateBudget budget(1000, 3'600'000, clock);
    auto corpus = corpus_with_matches(Platform::Twitter, 25, 5);
    PlatformCapabilities caps = default_capabilities(Platform::Twitter);
    caps.maxResultsPerRequest = 10;
    FixtureAdapter adapter(Platform::Twitter, caps, corpus);

    std::size_t fetches = 0;
    std::optional<PageCursor> cursor;
    NativeRequest request{"fire", 0, std::nullopt, std::nullopt};
    for (;;) {
        budget.consume(1);
        ++fetches;
        Page page = adapter.fetch_page(request, cursor);
        if (!page.next) break;
        cursor = page.next;
    }
    CHECK(fetches == 3);
    CHECK(budget.capacity() - budget.tokens() == fetches);
}
