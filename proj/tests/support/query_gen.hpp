#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "smapi/query.hpp"
#include "smapi/query_plan.hpp"

namespace smapi::testing {

// Random query trees over a fixed vocabulary, bounded by literal count.
// Used by the truth-table oracle and the plan-soundness sweeps.
class QueryGenerator {
public:
    QueryGenerator(std::vector<std::string> vocabulary, std::uint64_t seed,
                   double phrase_probability = 0.15)
        : vocabulary_(std::move(vocabulary)), rng_(seed),
          phrase_probability_(phrase_probability) {}

    QueryPtr generate(std::size_t max_literals) {
        std::size_t budget = 1 + rng_() % max_literals;
        return node(budget, 0);
    }

    // query text as a user would type it
    std::string generate_text(std::size_t max_literals) {
        return query_to_string(generate(max_literals));
    }

private:
    QueryPtr leaf() {
        const std::string& a = vocabulary_[rng_() % vocabulary_.size()];
        if (chance(phrase_probability_) && vocabulary_.size() > 1) {
            const std::string& b = vocabulary_[rng_() % vocabulary_.size()];
            return QueryNode::phrase(a + " " + b);
        }
        return QueryNode::term(a);
    }

    QueryPtr node(std::size_t budget, int depth) {
        if (budget <= 1 || depth >= 4) {
            QueryPtr l = leaf();
            return chance(0.2) ? QueryNode::negation(l) : l;
        }
        double roll = uniform();
        if (roll < 0.15) {
            return QueryNode::negation(node(budget - 1, depth + 1));
        }
        std::size_t left = 1 + rng_() % (budget - 1);
        std::vector<QueryPtr> children;
        children.push_back(node(left, depth + 1));
        children.push_back(node(budget - left, depth + 1));
        return roll < 0.60 ? QueryNode::conjunction(std::move(children))
                           : QueryNode::disjunction(std::move(children));
    }

    double uniform() { return static_cast<double>(rng_() % 1000000) / 1000000.0; }
    bool chance(double p) { return uniform() < p; }

    std::vector<std::string> vocabulary_;
    std::mt19937_64 rng_;
    double phrase_probability_;
};

// Boolean oracle: evaluates a query tree against a truth assignment of its
// literals, independent of any text matching.
using Assignment = std::map<std::pair<bool, std::string>, bool>;

inline void collect_literals(const QueryPtr& node,
                             std::vector<std::pair<bool, std::string>>& out) {
    if (node->kind == QueryNode::Kind::Term || node->kind == QueryNode::Kind::Phrase) {
        std::pair<bool, std::string> lit{node->kind == QueryNode::Kind::Phrase, node->text};
        for (const auto& existing : out) {
            if (existing == lit) return;
        }
        out.push_back(std::move(lit));
        return;
    }
    for (const auto& child : node->children) collect_literals(child, out);
}

inline bool eval_ast(const QueryPtr& node, const Assignment& assignment) {
    switch (node->kind) {
    case QueryNode::Kind::Term:
    case QueryNode::Kind::Phrase:
        return assignment.at({node->kind == QueryNode::Kind::Phrase, node->text});
    case QueryNode::Kind::Not:
        return !eval_ast(node->children.front(), assignment);
    case QueryNode::Kind::And:
        for (const auto& c : node->children) {
            if (!eval_ast(c, assignment)) return false;
        }
        return true;
    case QueryNode::Kind::Or:
        for (const auto& c : node->children) {
            if (eval_ast(c, assignment)) return true;
        }
        return false;
    }
    return false;
}

inline bool eval_dnf(const Dnf& dnf, const Assignment& assignment) {
    for (const auto& conjunct : dnf.disjuncts) {
        bool ok = true;
        for (const auto& lit : conjunct.positive) {
            if (!assignment.at({lit.is_phrase, lit.literal_text})) {
                ok = false;
                break;
            }
        }
        for (const auto& lit : conjunct.negative) {
            if (!ok) break;
            if (assignment.at({lit.is_phrase, lit.literal_text})) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

} // namespace smapi::testing
