#include "smapi/query_plan.hpp"

#include <algorithm>

#include "smapi/errors.hpp"
#include "smapi/text.hpp"

namespace smapi {

bool Dnf::has_negative() const {
    return std::any_of(disjuncts.begin(), disjuncts.end(),
                       [](const Conjunct& c) { return !c.negative.empty(); });
}

bool Dnf::has_phrase() const {
    for (const auto& c : disjuncts) {
        for (const auto& l : c.positive) {
            if (l.is_phrase) return true;
        }
        for (const auto& l : c.negative) {
            if (l.is_phrase) return true;
        }
    }
    return false;
}

namespace {

std::vector<Conjunct> dnf_of(const QueryPtr& node, bool negated) {
    switch (node->kind) {
    case QueryNode::Kind::Term:
    case QueryNode::Kind::Phrase: {
        Literal lit{node->kind == QueryNode::Kind::Phrase, node->text};
        Conjunct c;
        (negated ? c.negative : c.positive).insert(std::move(lit));
        return {std::move(c)};
    }
    case QueryNode::Kind::Not:
        return dnf_of(node->children.front(), !negated);
    case QueryNode::Kind::And:
    case QueryNode::Kind::Or: {
        bool conjunctive = (node->kind == QueryNode::Kind::And) != negated;
        if (!conjunctive) {
            std::vector<Conjunct> out;
            for (const auto& child : node->children) {
                auto sub = dnf_of(child, negated);
                out.insert(out.end(), sub.begin(), sub.end());
                if (out.size() > kMaxDisjuncts) {
                    throw UnsupportedQueryError(
                        "query fans out beyond " + std::to_string(kMaxDisjuncts) +
                        " conjunctive requests; narrow the OR terms");
                }
            }
            return out;
        }
        std::vector<Conjunct> acc = {Conjunct{}};
        for (const auto& child : node->children) {
            auto sub = dnf_of(child, negated);
            std::vector<Conjunct> next;
            for (const auto& left : acc) {
                for (const auto& right : sub) {
                    Conjunct merged = left;
                    merged.positive.insert(right.positive.begin(), right.positive.end());
                    merged.negative.insert(right.negative.begin(), right.negative.end());
                    next.push_back(std::move(merged));
                    if (next.size() > kMaxDisjuncts) {
                        throw UnsupportedQueryError(
                            "query fans out beyond " + std::to_string(kMaxDisjuncts) +
                            " conjunctive requests; narrow the OR terms");
                    }
                }
            }
            acc = std::move(next);
        }
        return acc;
    }
    }
    return {};
}

QueryPtr literal_to_node(const Literal& l) {
    return l.is_phrase ? QueryNode::phrase(l.literal_text) : QueryNode::term(l.literal_text);
}

} // namespace

Dnf to_dnf(const QueryPtr& ast) {
    auto raw = dnf_of(ast, false);

    Dnf dnf;
    for (auto& c : raw) {
        if (std::find(dnf.disjuncts.begin(), dnf.disjuncts.end(), c) == dnf.disjuncts.end()) {
            dnf.disjuncts.push_back(std::move(c));
        }
    }
    for (const auto& c : dnf.disjuncts) {
        if (c.positive.empty()) {
            throw UnsupportedQueryError(
                "query contains a purely negative branch; platform search needs "
                "at least one positive keyword");
        }
    }
    return dnf;
}

QueryPtr dnf_to_ast(const Dnf& dnf) {
    std::vector<QueryPtr> disjuncts;
    for (const auto& c : dnf.disjuncts) {
        std::vector<QueryPtr> parts;
        for (const auto& l : c.positive) parts.push_back(literal_to_node(l));
        for (const auto& l : c.negative) parts.push_back(QueryNode::negation(literal_to_node(l)));
        disjuncts.push_back(QueryNode::conjunction(std::move(parts)));
    }
    return QueryNode::disjunction(std::move(disjuncts));
}

namespace {

std::string render_conjunct_native(const Conjunct& c, bool with_operators) {
    std::string out;
    for (const auto& l : c.positive) {
        if (!out.empty()) out += with_operators ? " AND " : " ";
        if (l.is_phrase) {
            out += '"' + l.literal_text + '"';
        } else {
            out += l.literal_text;
        }
    }
    if (with_operators) {
        for (const auto& l : c.negative) {
            if (!out.empty()) out += " AND ";
            out += "NOT ";
            if (l.is_phrase) {
                out += '"' + l.literal_text + '"';
            } else {
                out += l.literal_text;
            }
        }
    }
    return out;
}

// positive literals of one disjunct as a flat keyword conjunction; phrases
// contribute their word tokens and stay in the residual
std::string render_and_only(const Conjunct& c) {
    std::vector<std::string> words;
    for (const auto& l : c.positive) {
        if (l.is_phrase) {
            for (auto& w : text::word_tokens(l.literal_text)) words.push_back(std::move(w));
        } else {
            words.push_back(l.literal_text);
        }
    }
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

} // namespace

RewritePlan rewrite_for_platform(const Dnf& dnf, const PlatformCapabilities& caps,
                                 const std::optional<GeoCircle>& geo,
                                 const std::optional<TimeWindow>& window) {
    if (dnf.disjuncts.empty()) {
        throw InvalidRequestError("empty query plan");
    }

    RewritePlan plan;
    bool geo_native = geo && caps.nativeGeoFilter;
    bool window_native = window && caps.nativeTimeFilter;

    auto native_geo = geo_native ? geo : std::nullopt;
    auto native_window = window_native ? window : std::nullopt;

    if (!caps.keywordSearch) {
        // tag-only: one request per distinct positive term
        if (dnf.has_phrase()) {
            throw CapabilityError("platform supports tag search only; phrases cannot "
                                  "be expressed as tags");
        }
        std::vector<std::string> seen;
        for (std::size_t i = 0; i < dnf.disjuncts.size(); ++i) {
            for (const auto& l : dnf.disjuncts[i].positive) {
                std::string tag = l.literal_text;
                if (!tag.empty() && tag.front() == '#') tag.erase(0, 1);
                std::string folded = text::ascii_lower(tag);
                if (std::find(seen.begin(), seen.end(), folded) != seen.end()) continue;
                seen.push_back(folded);
                plan.nativeRequests.push_back({tag, i, native_geo, native_window});
            }
        }
        plan.postFilter.mustMatch = dnf_to_ast(dnf);
    } else if (caps.full_boolean() &&
               (caps.supports(QueryOperator::Phrase) || !dnf.has_phrase())) {
        // single request carrying the whole expression
        std::string expr;
        for (std::size_t i = 0; i < dnf.disjuncts.size(); ++i) {
            if (i) expr += " OR ";
            bool parens = dnf.disjuncts.size() > 1;
            if (parens) expr += '(';
            expr += render_conjunct_native(dnf.disjuncts[i], true);
            if (parens) expr += ')';
        }
        plan.nativeRequests.push_back({std::move(expr), 0, native_geo, native_window});
    } else if (caps.supports(QueryOperator::And)) {
        // one conjunctive request per disjunct; negatives and phrase
        // exactness are restored by removing non-matching items locally
        for (std::size_t i = 0; i < dnf.disjuncts.size(); ++i) {
            std::string keywords = render_and_only(dnf.disjuncts[i]);
            if (keywords.empty()) {
                throw CapabilityError("no searchable keywords for a conjunction-only "
                                      "platform (phrase without word characters)");
            }
            plan.nativeRequests.push_back({std::move(keywords), i, native_geo, native_window});
        }
        if (dnf.has_negative() || dnf.has_phrase()) {
            plan.postFilter.mustMatch = dnf_to_ast(dnf);
        }
    } else {
        throw CapabilityError("platform advertises no usable query operators");
    }

    if (geo && !geo_native) plan.postFilter.geo = geo;
    if (window && !window_native) plan.postFilter.window = window;
    plan.estimatedRequestUnits = plan.nativeRequests.size();
    return plan;
}

std::size_t estimate_cost(const RewritePlan& plan, std::size_t pagesPerRequest) {
    if (pagesPerRequest < 1) {
        throw InvalidRequestError("pagesPerRequest must be at least 1");
    }
    return plan.nativeRequests.size() * pagesPerRequest;
}

} // namespace smapi
