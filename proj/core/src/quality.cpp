#include "smapi/quality.hpp"

#include <algorithm>
#include <cmath>

#include "smapi/errors.hpp"
#include "smapi/text.hpp"

namespace smapi {

namespace {

const EnrichedData* enriched(const Activity& a) {
    return a.object.enrichedData ? &*a.object.enrichedData : nullptr;
}

double words_of(const Activity& a) {
    if (const auto* e = enriched(a); e && e->numOfWords) {
        return static_cast<double>(*e->numOfWords);
    }
    return static_cast<double>(text::whitespace_tokens(a.object.content).size());
}

double followers_of(const Activity& a) {
    const auto* e = enriched(a);
    if (!e) return 0.0;
    auto it = e->extensions.find("numFollowers");
    if (it == e->extensions.end() || !it->is_number()) return 0.0;
    return it->get<double>();
}

double likes_of(const Activity& a) {
    const auto* e = enriched(a);
    return e && e->numLikes ? static_cast<double>(*e->numLikes) : 0.0;
}

double retweets_of(const Activity& a) {
    const auto* e = enriched(a);
    return e && e->numRetweets ? static_cast<double>(*e->numRetweets) : 0.0;
}

double entropy_of(const Activity& a) {
    const auto* e = enriched(a);
    return e && e->entropy ? *e->entropy : 0.0;
}

double syllables_of(const Activity& a) {
    const auto* e = enriched(a);
    return e && e->syllablesPerWord ? *e->syllablesPerWord : 0.0;
}

double fear_of(const Activity& a) {
    const auto* e = enriched(a);
    return e && e->absFearFactor ? *e->absFearFactor : 0.0;
}

double happiness_of(const Activity& a) {
    const auto* e = enriched(a);
    return e && e->absHappinessFactor ? *e->absHappinessFactor : 0.0;
}

double query_term_occurrences(const Activity& a, const QueryContext& q) {
    double total = 0.0;
    for (const auto& term : q.terms) {
        total += static_cast<double>(text::count_term_matches(a.object.content, term));
    }
    return total;
}

double query_term_frequency(const Activity& a, const QueryContext& q) {
    double words = words_of(a);
    if (words <= 0.0) return 0.0;
    return query_term_occurrences(a, q) / words;
}

double tfidf_sum(const Activity& a, const CorpusContext& ctx, const QueryContext& q) {
    double total = 0.0;
    for (const auto& term : q.terms) total += tf_idf(term, a, ctx);
    return total;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// x / max, 0 when the result set has no signal for this attribute
double ratio(double value, double max) { return max > 0.0 ? clamp01(value / max) : 0.0; }

} // namespace

double tf_idf(const std::string& term, const Activity& a, const CorpusContext& ctx) {
    double words = words_of(a);
    if (words <= 0.0) return 0.0;
    double occurrences = static_cast<double>(text::count_term_matches(a.object.content, term));
    double tf = occurrences / words;
    std::size_t df = 0;
    if (auto it = ctx.document_frequency.find(text::ascii_lower(term));
        it != ctx.document_frequency.end()) {
        df = it->second;
    }
    double n = static_cast<double>(ctx.corpus_size);
    double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0;
    return tf * idf;
}

CorpusContext CorpusContext::build(const std::vector<ActivityPtr>& results,
                                   const QueryContext& query) {
    CorpusContext ctx;
    ctx.corpus_size = results.size();
    if (results.empty()) return ctx;

    for (const auto& term : query.terms) {
        std::size_t df = 0;
        for (const auto& a : results) {
            if (text::contains_term(a->object.content, term)) ++df;
        }
        ctx.document_frequency[text::ascii_lower(term)] = df;
    }

    ctx.min_time_ms = results.front()->start_epoch_ms();
    ctx.max_time_ms = ctx.min_time_ms;
    ctx.min_syllables = syllables_of(*results.front());
    ctx.max_syllables = ctx.min_syllables;

    for (const auto& a : results) {
        ctx.max_likes = std::max(ctx.max_likes, likes_of(*a));
        ctx.max_retweets = std::max(ctx.max_retweets, retweets_of(*a));
        ctx.max_followers = std::max(ctx.max_followers, followers_of(*a));
        ctx.max_words = std::max(ctx.max_words, words_of(*a));
        ctx.max_entropy = std::max(ctx.max_entropy, entropy_of(*a));
        ctx.max_happiness = std::max(ctx.max_happiness, happiness_of(*a));
        ctx.max_fear = std::max(ctx.max_fear, fear_of(*a));
        ctx.min_syllables = std::min(ctx.min_syllables, syllables_of(*a));
        ctx.max_syllables = std::max(ctx.max_syllables, syllables_of(*a));
        ctx.min_time_ms = std::min(ctx.min_time_ms, a->start_epoch_ms());
        ctx.max_time_ms = std::max(ctx.max_time_ms, a->start_epoch_ms());
        ctx.max_query_term_freq = std::max(ctx.max_query_term_freq,
                                           query_term_frequency(*a, query));
    }
    for (const auto& a : results) {
        ctx.max_tfidf = std::max(ctx.max_tfidf, tfidf_sum(*a, ctx, query));
    }
    return ctx;
}

const std::vector<AssessmentMethod>& assessment_methods() {
    using Cat = MethodCategory;
    static const std::vector<AssessmentMethod> methods = {
        {"followerCount", Cat::Metadata,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             return ratio(followers_of(a), c.max_followers);
         }},
        {"likeCount", Cat::Metadata,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             return ratio(likes_of(a), c.max_likes);
         }},
        {"retweetCount", Cat::Metadata,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             return ratio(retweets_of(a), c.max_retweets);
         }},
        {"hasMediaFile", Cat::Metadata,
         [](const Activity& a, const CorpusContext&, const QueryContext&) {
             const auto* e = enriched(a);
             return e && e->media ? 1.0 : 0.0;
         }},
        {"hasLocation", Cat::Metadata,
         [](const Activity& a, const CorpusContext&, const QueryContext&) {
             return a.object.location ? 1.0 : 0.0;
         }},
        {"queryTermFrequency", Cat::Content,
         [](const Activity& a, const CorpusContext& c, const QueryContext& q) {
             return ratio(query_term_frequency(a, q), c.max_query_term_freq);
         }},
        {"lengthScore", Cat::Content,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             return ratio(words_of(a), c.max_words);
         }},
        {"readability", Cat::Content,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             // fewer syllables per word reads easier
             double range = c.max_syllables - c.min_syllables;
             if (range <= 0.0) return 1.0;
             return clamp01(1.0 - (syllables_of(a) - c.min_syllables) / range);
         }},
        {"urlPresence", Cat::Content,
         [](const Activity& a, const CorpusContext&, const QueryContext&) {
             const auto* e = enriched(a);
             return e && e->embeddedUrls && !e->embeddedUrls->empty() ? 1.0 : 0.0;
         }},
        {"happinessScore", Cat::Classification,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             return ratio(happiness_of(a), c.max_happiness);
         }},
        {"fearScore", Cat::Classification,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             if (c.max_fear <= 0.0) return 1.0;
             return clamp01(1.0 - fear_of(a) / c.max_fear);
         }},
        {"languageMatch", Cat::Classification,
         [](const Activity& a, const CorpusContext&, const QueryContext& q) {
             if (!q.language) return 1.0;
             const auto* e = enriched(a);
             return e && e->language && *e->language == *q.language ? 1.0 : 0.0;
         }},
        {"tfIdfScore", Cat::Scientific,
         [](const Activity& a, const CorpusContext& c, const QueryContext& q) {
             return ratio(tfidf_sum(a, c, q), c.max_tfidf);
         }},
        {"entropyScore", Cat::Scientific,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             return ratio(entropy_of(a), c.max_entropy);
         }},
        {"recencyScore", Cat::Scientific,
         [](const Activity& a, const CorpusContext& c, const QueryContext&) {
             double range = static_cast<double>(c.max_time_ms - c.min_time_ms);
             if (range <= 0.0) return 1.0;
             return clamp01(static_cast<double>(a.start_epoch_ms() - c.min_time_ms) / range);
         }},
    };
    return methods;
}

const AssessmentMethod* find_method(const std::string& id) {
    for (const auto& m : assessment_methods()) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

double assess_activity(const Activity& a, const WeightProfile& profile,
                       const CorpusContext& ctx, const QueryContext& query) {
    double weighted = 0.0;
    double total_weight = 0.0;
    for (const auto& [id, weight] : profile.weights) {
        if (weight < 0.0) {
            throw InvalidRequestError("negative weight for assessment method \"" + id + "\"",
                                      {{id, "weight must be >= 0"}});
        }
        const AssessmentMethod* method = find_method(id);
        if (!method) {
            throw InvalidRequestError("unknown assessment method \"" + id + "\"",
                                      {{id, "unknown assessment method"}});
        }
        if (weight == 0.0) continue;
        weighted += weight * clamp01(method->scorer(a, ctx, query));
        total_weight += weight;
    }
    if (total_weight <= 0.0) {
        throw InvalidRequestError("no methods selected",
                                  {{"weightProfile", "at least one weight must be > 0"}});
    }
    return weighted / total_weight;
}

std::vector<RankedActivity> rank_activities(const std::vector<ActivityPtr>& items,
                                            const WeightProfile& profile,
                                            const CorpusContext& ctx,
                                            const QueryContext& query) {
    std::vector<RankedActivity> ranked;
    ranked.reserve(items.size());
    for (const auto& a : items) {
        ranked.push_back({a, assess_activity(*a, profile, ctx, query)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedActivity& x, const RankedActivity& y) {
                         if (x.score != y.score) return x.score > y.score;
                         auto tx = x.activity->start_epoch_ms();
                         auto ty = y.activity->start_epoch_ms();
                         if (tx != ty) return tx > ty; // newer first
                         return x.activity->canonical_id() < y.activity->canonical_id();
                     });
    return ranked;
}

} // namespace smapi
