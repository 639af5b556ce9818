#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "smapi/activity.hpp"

namespace smapi {

struct EntityExtraction {
    std::vector<std::string> embeddedUrls;
    std::vector<std::string> mentions; // '@' stripped
    std::vector<std::string> tags;     // '#' stripped
};

// URLs are maximal "http(s)://..." spans up to whitespace; mentions and tags
// are '@'/'#'-prefixed word tokens outside URL spans. First occurrence wins,
// duplicates dropped.
EntityExtraction extract_entities(std::string_view text);

struct ContentMetrics {
    std::int64_t numOfCharacters = 0; // code points
    std::int64_t numOfWords = 0;      // whitespace-separated tokens
    double avgWordLength = 0.0;
    double wordsToSentencesRatio = 0.0;
    std::int64_t numPunctuation = 0;
    double syllablesPerWord = 0.0;
    double entropy = 0.0; // bits, over the code point distribution
};

ContentMetrics compute_content_metrics(std::string_view text);

struct SentimentLexicons {
    std::unordered_set<std::string> fear;
    std::unordered_set<std::string> happiness;
};

struct SentimentFactors {
    double fear = 0.0;      // absolute lexicon hit counts
    double happiness = 0.0;
};

// Counts lexicon hits among the word tokens, case-insensitively. Callers
// pass text that already went through emoticon and slang conversion.
SentimentFactors compute_sentiment(std::string_view text, const SentimentLexicons& lexicons);

using TokenMap = std::map<std::string, std::string>;

// Whole-token replacement on whitespace tokens; unmapped tokens pass
// through, output tokens are joined with single spaces.
std::string convert_emoticons(std::string_view text, const TokenMap& map);
std::string convert_slang(std::string_view text, const TokenMap& map);

using StopwordLists = std::map<std::string, std::unordered_set<std::string>>;

// Stopword-overlap heuristic: the language whose list matches the most
// tokens wins (ties break to the lexicographically first code); "und" when
// nothing matches.
std::string detect_language(std::string_view text, const StopwordLists& stopwords);

// Lexicons, conversion maps and stopword lists, loaded from a config
// directory at startup:
//   fear.txt, happiness.txt      one lowercase token per line, '#' comments
//   emoticons.json, slang.json   {"token": "replacement", ...}
//   stopwords/<code>.txt         one token per line per language
struct EnrichmentConfig {
    SentimentLexicons lexicons;
    TokenMap emoticons;
    TokenMap slang;
    StopwordLists stopwords;

    static EnrichmentConfig load(const std::filesystem::path& dir);
};

class Enricher {
public:
    explicit Enricher(EnrichmentConfig config) : config_(std::move(config)) {}

    // Computes the full enrichment block from the object content. Platform
    // passthrough values (media, engagement counts, extension entries) are
    // preserved; the content itself is never modified, so re-enriching is
    // idempotent.
    Activity enrich(const Activity& a) const;

    const EnrichmentConfig& config() const { return config_; }

private:
    EnrichmentConfig config_;
};

} // namespace smapi
