#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "smapi/activity.hpp"
#include "smapi/enrichment.hpp"
#include "smapi/platform.hpp"
#include "smapi/timestamp.hpp"

namespace smapi::testing {

inline std::filesystem::path data_dir() { return SMAPI_DATA_DIR; }
inline std::filesystem::path enrichment_dir() { return data_dir() / "config"; }
inline std::filesystem::path fixture_dir() { return data_dir() / "fixtures"; }

inline const Enricher& shipped_enricher() {
    static Enricher enricher(EnrichmentConfig::load(enrichment_dir()));
    return enricher;
}

inline Activity make_activity(const std::string& native_id, const std::string& content,
                              std::int64_t start_ms = 1485941447000,
                              Platform platform = Platform::Twitter) {
    Activity a;
    a.actor.id = PlatformId(platform, "user-" + native_id);
    a.actor.displayName = "Fixture User";
    a.actor.url = "https://example.org/u/" + native_id;
    a.object.id = PlatformId(platform, native_id);
    a.object.content = content;
    a.object.url = "https://example.org/p/" + native_id;
    a.object.startTime = Timestamp{start_ms, 0};
    return a;
}

inline ActivityPtr make_activity_ptr(const std::string& native_id, const std::string& content,
                                     std::int64_t start_ms = 1485941447000,
                                     Platform platform = Platform::Twitter) {
    return std::make_shared<Activity>(make_activity(native_id, content, start_ms, platform));
}

// unique temp directory per test binary run
inline std::filesystem::path temp_dir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path() /
                ("smapi-test-" + tag + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(base);
    return base;
}

} // namespace smapi::testing
