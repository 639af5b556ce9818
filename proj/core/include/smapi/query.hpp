#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace smapi {

// Immutable query tree. Nodes are shared so plans and post-filters can hold
// sub-expressions without copying.
struct QueryNode;
using QueryPtr = std::shared_ptr<const QueryNode>;

struct QueryNode {
    enum class Kind { Term, Phrase, And, Or, Not };

    Kind kind;
    std::string text;               // Term / Phrase
    std::vector<QueryPtr> children; // And / Or (>= 2), Not (exactly 1)

    static QueryPtr term(std::string t);
    static QueryPtr phrase(std::string t);
    static QueryPtr conjunction(std::vector<QueryPtr> children);
    static QueryPtr disjunction(std::vector<QueryPtr> children);
    static QueryPtr negation(QueryPtr child);
};

bool query_equal(const QueryPtr& a, const QueryPtr& b);

// Grammar: uppercase AND/OR/NOT are operators, double quotes delimit
// phrases, parentheses group, adjacency means AND, precedence
// NOT > AND > OR, left-associative. The result is normalized: NOT NOT x
// collapses, nested same-kind And/Or flatten, single-child groups lift.
// Throws QueryParseError with the byte position of the offending token.
QueryPtr parse_query(std::string_view text);

// Prints a query that parses back to an equal tree.
std::string query_to_string(const QueryPtr& ast);

// Reference evaluator: Term matches on word boundaries case-insensitively,
// Phrase matches the exact span, And/Or/Not are boolean. Also executes
// residual post-filters.
bool evaluate_match(const QueryPtr& ast, std::string_view document_text);

} // namespace smapi
