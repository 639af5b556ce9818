#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smapi/geo.hpp"
#include "smapi/query.hpp"

namespace smapi {

enum class QueryOperator { And, Or, Not, Phrase };

// What a platform's search API natively understands. keywordSearch false
// means the platform only accepts a single tag per request, in which case
// operators must be empty.
struct PlatformCapabilities {
    std::set<QueryOperator> operators;
    bool nativeGeoFilter = false;
    bool nativeTimeFilter = false;
    bool keywordSearch = true;
    std::size_t maxResultsPerRequest = 100;

    bool supports(QueryOperator op) const { return operators.contains(op); }
    bool full_boolean() const {
        return supports(QueryOperator::And) && supports(QueryOperator::Or) &&
               supports(QueryOperator::Not);
    }
};

struct Literal {
    bool is_phrase = false;
    std::string literal_text;

    auto operator<=>(const Literal&) const = default;
};

struct Conjunct {
    std::set<Literal> positive;
    std::set<Literal> negative;

    bool operator==(const Conjunct&) const = default;
    auto operator<=>(const Conjunct&) const = default;
};

struct Dnf {
    std::vector<Conjunct> disjuncts;

    bool has_negative() const;
    bool has_phrase() const;
};

// Queries whose DNF exceeds this fan-out are rejected: each extra disjunct
// is another native request on conjunction-only platforms.
inline constexpr std::size_t kMaxDisjuncts = 64;

// Equivalent OR-of-ANDs form, deduplicated. Throws UnsupportedQueryError if
// any disjunct ends up purely negative (platform search needs a positive
// keyword) or the fan-out exceeds kMaxDisjuncts.
Dnf to_dnf(const QueryPtr& ast);

// Rebuilds a query tree from the DNF (used for residual post-filters).
QueryPtr dnf_to_ast(const Dnf& dnf);

struct TimeWindow {
    std::optional<std::int64_t> since_ms;
    std::optional<std::int64_t> until_ms;

    bool contains(std::int64_t t_ms) const {
        if (since_ms && t_ms < *since_ms) return false;
        if (until_ms && t_ms > *until_ms) return false;
        return true;
    }

    bool operator==(const TimeWindow&) const = default;
};

// One platform API call: the keyword string in the platform's native syntax
// plus the filters the platform applies itself.
struct NativeRequest {
    std::string keywordString;
    std::size_t conjunctIndex = 0;
    std::optional<GeoCircle> geo;
    std::optional<TimeWindow> window;
};

// Applied locally to gathered items to restore whatever the platform could
// not express natively.
struct PostFilter {
    QueryPtr mustMatch; // null means no residual query
    std::optional<GeoCircle> geo;
    std::optional<TimeWindow> window;

    bool empty() const { return !mustMatch && !geo && !window; }
};

struct RewritePlan {
    std::vector<NativeRequest> nativeRequests;
    PostFilter postFilter;
    std::size_t estimatedRequestUnits = 0;
};

// Translates the DNF into native requests plus residual:
//  - full boolean platforms get one request carrying the whole expression;
//  - AND-only platforms get one request per disjunct (positive literals
//    conjoined; phrases demoted to their words) and the full query as
//    residual whenever negatives or phrases are present;
//  - tag-only platforms get one request per distinct positive term, with the
//    full query as residual; phrase literals are a capability error.
// Geo and time filters ride on the native requests iff the capability flags
// allow, otherwise they move into the post-filter.
RewritePlan rewrite_for_platform(const Dnf& dnf, const PlatformCapabilities& caps,
                                 const std::optional<GeoCircle>& geo = std::nullopt,
                                 const std::optional<TimeWindow>& window = std::nullopt);

// Request units consumed when every native request is paged through
// `pagesPerRequest` times.
std::size_t estimate_cost(const RewritePlan& plan, std::size_t pagesPerRequest);

} // namespace smapi
