#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "smapi/adapters.hpp"
#include "smapi/platform.hpp"
#include "smapi/timestamp.hpp"

namespace smapi::fixtures {

// Deterministic synthetic corpora standing in for the defunct platform APIs.
// Distributions are controlled: a shared keyword vocabulary, a block of
// always-co-occurring keywords (for request fan-out measurements), geo
// points jittered around a few city centers, timestamps across a two-week
// window, and per-platform native schemas. Instagram captions consist solely
// of hashtags so tag search and text search agree on that corpus.

const std::vector<std::string>& keyword_vocabulary();

// These five keywords only ever appear together in one document.
const std::vector<std::string>& cooccurring_keywords();

struct GeneratorOptions {
    std::uint64_t seed = 20170201;
    std::size_t items_per_platform = 520;
    std::int64_t base_time_ms = 1485907200000; // 2017-02-01T00:00:00Z
    std::int64_t time_span_ms = 14LL * 24 * 3600 * 1000;
};

std::vector<NativeItem> generate(Platform p, const GeneratorOptions& options = {});

std::map<Platform, std::shared_ptr<FixtureCorpus>> generate_corpora(
    const GeneratorOptions& options = {});

// Writes "<platform>.jsonl" per platform into dir.
void write_fixture_files(const std::filesystem::path& dir,
                         const GeneratorOptions& options = {});

// Minimal native record with controlled content, for targeted tests (e.g.
// appending fresh items between crawl ticks). For instagram, `text` becomes
// the caption and `tags` the tag list.
NativeItem plain_item(Platform p, const std::string& native_id, const std::string& text,
                      const Timestamp& created,
                      std::optional<std::pair<double, double>> latlon = std::nullopt,
                      std::vector<std::string> tags = {});

} // namespace smapi::fixtures
