#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "smapi/activity.hpp"
#include "smapi/platform.hpp"
#include "smapi/query_plan.hpp"

namespace smapi {

// Platform-shaped record exactly as the (fixture) API returns it. The field
// names differ per platform; callers treat it as opaque and go through
// map_native / native views.
using NativeItem = nlohmann::json;

// Shipped capability profiles:
//   twitter     AND OR NOT PHRASE, native geo, native time
//   youtube     AND OR NOT PHRASE, native geo, native time
//   googleplus  AND OR NOT PHRASE, no native geo/time
//   facebook    AND only, native time
//   instagram   tag-only search, no native filters
PlatformCapabilities default_capabilities(Platform p);

// Fields every adapter needs from a native record, normalized once.
struct NativeView {
    std::string native_id;
    std::string body;
    std::optional<Timestamp> created;
    std::optional<std::pair<double, double>> latlon; // lat, lon
    std::vector<std::string> tags;
};

// Extracts the per-platform fields; throws SchemaError when the record lacks
// a native id or creation timestamp.
NativeView native_view(Platform p, const NativeItem& item);

// Normalizes a native record into an activity: canonical platform-prefixed
// ids, ISO-8601 timestamps, engagement counts as enrichment passthrough, and
// the full native record retained under object extensions ("nativeData").
Activity map_native(Platform p, const NativeItem& item);

// Mutable deterministic item source standing in for a platform API. Items
// keep insertion order; appends model the platform receiving new posts
// between crawl ticks.
class FixtureCorpus {
public:
    FixtureCorpus() = default;
    explicit FixtureCorpus(std::vector<NativeItem> items) : items_(std::move(items)) {}

    static std::shared_ptr<FixtureCorpus> load_jsonl(const std::filesystem::path& file);

    void append(NativeItem item);
    std::size_t size() const;
    std::vector<NativeItem> snapshot() const;

private:
    mutable std::shared_mutex mu_;
    std::vector<NativeItem> items_;
};

struct PageCursor {
    std::string token;

    bool operator==(const PageCursor&) const = default;
};

struct Page {
    std::vector<NativeItem> items;
    std::optional<PageCursor> next;
};

// Polling consumer over a fixture corpus, honoring the platform's native
// query semantics: full-boolean platforms evaluate the whole expression,
// conjunction-only platforms require every keyword, tag-only platforms match
// the tag list. Requests using operators outside the capability profile are
// rejected — that signals a rewriter bug, not a data problem.
class FixtureAdapter {
public:
    FixtureAdapter(Platform platform, PlatformCapabilities caps,
                   std::shared_ptr<FixtureCorpus> corpus)
        : platform_(platform), caps_(std::move(caps)), corpus_(std::move(corpus)) {}

    Platform platform() const { return platform_; }
    const PlatformCapabilities& capabilities() const { return caps_; }
    const std::shared_ptr<FixtureCorpus>& corpus() const { return corpus_; }

    // Caller must have consumed one request unit from the platform budget.
    Page fetch_page(const NativeRequest& request,
                    const std::optional<PageCursor>& cursor = std::nullopt) const;

private:
    bool native_match(const NativeRequest& request, const NativeView& view) const;

    Platform platform_;
    PlatformCapabilities caps_;
    std::shared_ptr<FixtureCorpus> corpus_;
};

class AdapterRegistry {
public:
    using MaxResultsOverrides = std::map<Platform, std::size_t>;

    // Loads "<platform>.jsonl" for every known platform from `dir`.
    static AdapterRegistry load_fixture_dir(const std::filesystem::path& dir,
                                            const MaxResultsOverrides& overrides = {});

    static AdapterRegistry from_corpora(
        std::map<Platform, std::shared_ptr<FixtureCorpus>> corpora,
        const MaxResultsOverrides& overrides = {});

    bool has(Platform p) const { return adapters_.contains(p); }
    const FixtureAdapter& adapter(Platform p) const;
    PlatformCapabilities capabilities(Platform p) const { return adapter(p).capabilities(); }

private:
    std::map<Platform, std::unique_ptr<FixtureAdapter>> adapters_;
};

} // namespace smapi
