#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smapi/activity.hpp"

namespace smapi {

enum class MethodCategory { Metadata, Content, Classification, Scientific };

struct QueryContext {
    std::vector<std::string> terms;      // positive query keywords
    std::optional<std::string> language; // preferred result language
};

// Normalization context built once per result set so scores stay comparable
// within one query.
struct CorpusContext {
    std::size_t corpus_size = 0;
    std::map<std::string, std::size_t> document_frequency; // per query term

    double max_likes = 0.0;
    double max_retweets = 0.0;
    double max_followers = 0.0;
    double max_words = 0.0;
    double max_entropy = 0.0;
    double max_happiness = 0.0;
    double max_fear = 0.0;
    double min_syllables = 0.0;
    double max_syllables = 0.0;
    double max_query_term_freq = 0.0;
    double max_tfidf = 0.0;
    std::int64_t min_time_ms = 0;
    std::int64_t max_time_ms = 0;

    static CorpusContext build(const std::vector<ActivityPtr>& results,
                               const QueryContext& query);
};

// One assessment method: scorer maps an enriched activity into [0,1].
struct AssessmentMethod {
    std::string id;
    MethodCategory category;
    std::function<double(const Activity&, const CorpusContext&, const QueryContext&)> scorer;
};

// The shipped 15-method roster across the four categories:
//   metadata        followerCount likeCount retweetCount hasMediaFile hasLocation
//   content         queryTermFrequency lengthScore readability urlPresence
//   classification  happinessScore fearScore languageMatch
//   scientific      tfIdfScore entropyScore recencyScore
const std::vector<AssessmentMethod>& assessment_methods();
const AssessmentMethod* find_method(const std::string& id);

// User-tailorable weighting over method ids; weights must be >= 0 and at
// least one strictly positive.
struct WeightProfile {
    std::map<std::string, double> weights;
};

// Weighted mean of the selected method scores. Throws InvalidRequestError on
// an all-zero profile or unknown method id.
double assess_activity(const Activity& a, const WeightProfile& profile,
                       const CorpusContext& ctx, const QueryContext& query);

struct RankedActivity {
    ActivityPtr activity;
    double score = 0.0;
};

// Descending score; ties break to newer startTime, then canonical id.
std::vector<RankedActivity> rank_activities(const std::vector<ActivityPtr>& items,
                                            const WeightProfile& profile,
                                            const CorpusContext& ctx,
                                            const QueryContext& query);

// tf = occurrences / words; idf = ln((1 + N) / (1 + df)) + 1.
double tf_idf(const std::string& term, const Activity& a, const CorpusContext& ctx);

} // namespace smapi
