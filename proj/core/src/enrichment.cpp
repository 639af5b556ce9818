#include "smapi/enrichment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "smapi/errors.hpp"
#include "smapi/text.hpp"

namespace smapi {

namespace {

bool is_word_byte(unsigned char c) { return text::is_word_byte(c); }

struct Span {
    std::size_t begin;
    std::size_t end;
};

void push_unique(std::vector<std::string>& out, std::string value) {
    if (std::find(out.begin(), out.end(), value) == out.end()) {
        out.push_back(std::move(value));
    }
}

} // namespace

EntityExtraction extract_entities(std::string_view s) {
    EntityExtraction result;
    std::vector<Span> url_spans;

    for (std::size_t i = 0; i < s.size();) {
        if (s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0) {
            std::size_t end = i;
            while (end < s.size() && !std::isspace(static_cast<unsigned char>(s[end]))) {
                ++end;
            }
            url_spans.push_back({i, end});
            push_unique(result.embeddedUrls, std::string(s.substr(i, end - i)));
            i = end;
        } else {
            ++i;
        }
    }

    auto inside_url = [&](std::size_t pos) {
        return std::any_of(url_spans.begin(), url_spans.end(),
                           [&](const Span& sp) { return pos >= sp.begin && pos < sp.end; });
    };

    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c != '@' && c != '#') continue;
        if (inside_url(i)) continue;
        // the sigil must start a token, not split one ("mail@host" is no mention)
        if (i > 0 && is_word_byte(static_cast<unsigned char>(s[i - 1]))) continue;
        std::size_t end = i + 1;
        while (end < s.size() && is_word_byte(static_cast<unsigned char>(s[end]))) ++end;
        if (end == i + 1) continue;
        std::string token(s.substr(i + 1, end - i - 1));
        if (c == '@') {
            push_unique(result.mentions, std::move(token));
        } else {
            push_unique(result.tags, std::move(token));
        }
    }
    return result;
}

namespace {

bool is_ascii_vowel(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
        return true;
    default:
        return false;
    }
}

bool is_letter_byte(unsigned char c) { return std::isalpha(c) || c >= 0x80; }

int syllables_of(std::string_view word) {
    bool has_letter = false;
    int groups = 0;
    bool in_group = false;
    for (char c : word) {
        unsigned char u = static_cast<unsigned char>(c);
        if (is_letter_byte(u)) has_letter = true;
        if (u < 0x80 && is_ascii_vowel(c)) {
            if (!in_group) {
                ++groups;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }
    if (!has_letter) return 0;
    return std::max(groups, 1);
}

} // namespace

ContentMetrics compute_content_metrics(std::string_view s) {
    ContentMetrics m;
    if (s.empty()) return m;

    m.numOfCharacters = static_cast<std::int64_t>(text::utf8_codepoints(s));

    auto words = text::whitespace_tokens(s);
    m.numOfWords = static_cast<std::int64_t>(words.size());

    if (!words.empty()) {
        double total_len = 0.0;
        double total_syllables = 0.0;
        for (auto w : words) {
            total_len += static_cast<double>(text::utf8_codepoints(w));
            total_syllables += syllables_of(w);
        }
        m.avgWordLength = total_len / static_cast<double>(words.size());
        m.syllablesPerWord = total_syllables / static_cast<double>(words.size());
    }

    static const std::string punctuation = ".,;:!?\"'()-";
    for (char c : s) {
        if (punctuation.find(c) != std::string::npos) ++m.numPunctuation;
    }

    // sentences: segments between runs of {. ! ?} holding any non-whitespace
    std::int64_t sentences = 0;
    bool segment_has_content = false;
    for (char c : s) {
        if (c == '.' || c == '!' || c == '?') {
            if (segment_has_content) ++sentences;
            segment_has_content = false;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            segment_has_content = true;
        }
    }
    if (segment_has_content) ++sentences;
    if (sentences == 0) sentences = 1;
    m.wordsToSentencesRatio =
        static_cast<double>(m.numOfWords) / static_cast<double>(sentences);

    auto codepoints = text::utf8_decode(s);
    std::map<std::uint32_t, std::size_t> freq;
    for (auto cp : codepoints) ++freq[cp];
    double n = static_cast<double>(codepoints.size());
    double entropy = 0.0;
    for (const auto& [cp, count] : freq) {
        double p = static_cast<double>(count) / n;
        entropy -= p * std::log2(p);
    }
    m.entropy = std::max(entropy, 0.0);
    return m;
}

SentimentFactors compute_sentiment(std::string_view s, const SentimentLexicons& lexicons) {
    SentimentFactors factors;
    for (const auto& token : text::word_tokens(s)) {
        if (lexicons.fear.contains(token)) factors.fear += 1.0;
        if (lexicons.happiness.contains(token)) factors.happiness += 1.0;
    }
    return factors;
}

namespace {

std::string convert_tokens(std::string_view s, const TokenMap& map) {
    std::string out;
    for (auto token : text::whitespace_tokens(s)) {
        if (!out.empty()) out += ' ';
        auto it = map.find(std::string(token));
        if (it != map.end()) {
            out += it->second;
        } else {
            out += token;
        }
    }
    return out;
}

} // namespace

std::string convert_emoticons(std::string_view s, const TokenMap& map) {
    return convert_tokens(s, map);
}

std::string convert_slang(std::string_view s, const TokenMap& map) {
    return convert_tokens(s, map);
}

std::string detect_language(std::string_view s, const StopwordLists& stopwords) {
    auto tokens = text::word_tokens(s);
    std::string best = "und";
    std::size_t best_count = 0;
    for (const auto& [code, words] : stopwords) {
        std::size_t count = 0;
        for (const auto& token : tokens) {
            if (words.contains(token)) ++count;
        }
        if (count > best_count) {
            best = code;
            best_count = count;
        }
    }
    return best_count == 0 ? "und" : best;
}

namespace {

std::unordered_set<std::string> load_word_list(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("missing lexicon file: " + file.string());
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        words.insert(text::ascii_lower(line));
    }
    return words;
}

TokenMap load_token_map(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("missing conversion map: " + file.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError("conversion map is not a JSON object: " + file.string());
    }
    TokenMap map;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.value().is_string()) {
            throw ConfigError("conversion map values must be strings: " + file.string());
        }
        map[it.key()] = it.value().get<std::string>();
    }
    return map;
}

} // namespace

EnrichmentConfig EnrichmentConfig::load(const std::filesystem::path& dir) {
    EnrichmentConfig config;
    config.lexicons.fear = load_word_list(dir / "fear.txt");
    config.lexicons.happiness = load_word_list(dir / "happiness.txt");
    config.emoticons = load_token_map(dir / "emoticons.json");
    config.slang = load_token_map(dir / "slang.json");

    auto stopword_dir = dir / "stopwords";
    if (!std::filesystem::is_directory(stopword_dir)) {
        throw ConfigError("missing stopword directory: " + stopword_dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(stopword_dir)) {
        if (entry.path().extension() != ".txt") continue;
        config.stopwords[entry.path().stem().string()] = load_word_list(entry.path());
    }
    if (config.stopwords.empty()) {
        throw ConfigError("no stopword lists under " + stopword_dir.string());
    }
    return config;
}

Activity Enricher::enrich(const Activity& a) const {
    Activity out = a;
    const std::string& body = a.object.content;

    EnrichedData e;
    // platform passthrough survives re-enrichment
    if (a.object.enrichedData) {
        e.media = a.object.enrichedData->media;
        e.numRetweets = a.object.enrichedData->numRetweets;
        e.numLikes = a.object.enrichedData->numLikes;
        e.extensions = a.object.enrichedData->extensions;
    }

    auto entities = extract_entities(body);
    e.embeddedUrls = std::move(entities.embeddedUrls);
    e.mentions = std::move(entities.mentions);
    e.tags = std::move(entities.tags);

    auto metrics = compute_content_metrics(body);
    e.numOfCharacters = metrics.numOfCharacters;
    e.numOfWords = metrics.numOfWords;
    e.avgWordLength = metrics.avgWordLength;
    e.wordsToSentencesRatio = metrics.wordsToSentencesRatio;
    e.numPunctuation = metrics.numPunctuation;
    e.syllablesPerWord = metrics.syllablesPerWord;
    e.entropy = metrics.entropy;

    e.convertedEmoticons = convert_emoticons(body, config_.emoticons);
    e.convertedSlang = convert_slang(body, config_.slang);

    auto sentiment = compute_sentiment(
        convert_slang(convert_emoticons(body, config_.emoticons), config_.slang),
        config_.lexicons);
    e.absFearFactor = sentiment.fear;
    e.absHappinessFactor = sentiment.happiness;

    e.language = detect_language(body, config_.stopwords);

    out.object.enrichedData = std::move(e);
    return out;
}

} // namespace smapi
