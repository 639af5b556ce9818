#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace smapi {

enum class MediaType { Photo, Video, Other };

std::string_view to_string(MediaType t);
MediaType media_type_from_string(std::string_view s);

struct MediaAttachment {
    std::string mediaType; // MIME, e.g. "image/jpeg"
    MediaType type = MediaType::Other;
    std::string url;

    nlohmann::json extensions = nlohmann::json::object();

    bool operator==(const MediaAttachment&) const = default;
};

// Computed metadata block attached to each activity. Every field is optional
// at the document level: a freshly mapped activity only carries platform
// passthrough counts, the enrichment pass fills in the rest, and parsed
// documents keep exactly the fields they arrived with.
struct EnrichedData {
    std::optional<double> absFearFactor;
    std::optional<double> absHappinessFactor;
    std::optional<std::string> convertedEmoticons;
    std::optional<std::string> convertedSlang;
    std::optional<std::vector<std::string>> embeddedUrls;
    std::optional<std::string> language; // ISO-639-1 or "und"
    std::optional<std::vector<std::string>> tags;     // '#' stripped
    std::optional<std::vector<std::string>> mentions; // '@' stripped
    std::optional<MediaAttachment> media;
    std::optional<std::int64_t> numOfCharacters;
    std::optional<std::int64_t> numOfWords;
    std::optional<double> avgWordLength;
    std::optional<double> wordsToSentencesRatio;
    std::optional<std::int64_t> numPunctuation;
    std::optional<double> syllablesPerWord;
    std::optional<double> entropy; // bits
    std::optional<std::int64_t> numRetweets; // platform passthrough
    std::optional<std::int64_t> numLikes;    // platform passthrough

    // Unknown keys from parsed documents plus extra passthrough values
    // (e.g. "numFollowers") that have no first-class field.
    nlohmann::json extensions = nlohmann::json::object();

    bool operator==(const EnrichedData&) const = default;
};

} // namespace smapi
