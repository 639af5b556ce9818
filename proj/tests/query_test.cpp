#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smapi/errors.hpp"
#include "smapi/query.hpp"
#include "smapi/query_plan.hpp"
#include "support/query_gen.hpp"

using namespace smapi;

namespace {

PlatformCapabilities full_caps() {
    PlatformCapabilities caps;
    caps.operators = {QueryOperator::And, QueryOperator::Or, QueryOperator::Not,
                      QueryOperator::Phrase};
    return caps;
}

PlatformCapabilities and_only_caps() {
    PlatformCapabilities caps;
    caps.operators = {QueryOperator::And};
    return caps;
}

PlatformCapabilities tag_only_caps() {
    PlatformCapabilities caps;
    caps.keywordSearch = false;
    return caps;
}

} // namespace

TEST_CASE("single term") {
    QueryPtr q = parse_query("berlin");
    CHECK(q->kind == QueryNode::Kind::Term);
    CHECK(q->text == "berlin");
}

TEST_CASE("operators, grouping and precedence") {
    QueryPtr q = parse_query("fire AND (berlin OR hamburg)");
    REQUIRE(q->kind == QueryNode::Kind::And);
    REQUIRE(q->children.size() == 2);
    CHECK(q->children[0]->text == "fire");
    REQUIRE(q->children[1]->kind == QueryNode::Kind::Or);
    CHECK(q->children[1]->children[0]->text == "berlin");
    CHECK(q->children[1]->children[1]->text == "hamburg");

    // NOT > AND > OR
    QueryPtr prec = parse_query("a OR b AND NOT c");
    REQUIRE(prec->kind == QueryNode::Kind::Or);
    REQUIRE(prec->children[1]->kind == QueryNode::Kind::And);
    CHECK(prec->children[1]->children[1]->kind == QueryNode::Kind::Not);
}

TEST_CASE("adjacency means AND") {
    QueryPtr q = parse_query("flood NOT drill");
    REQUIRE(q->kind == QueryNode::Kind::And);
    CHECK(q->children[0]->text == "flood");
    REQUIRE(q->children[1]->kind == QueryNode::Kind::Not);
    CHECK(q->children[1]->children[0]->text == "drill");

    CHECK(query_equal(parse_query("fire berlin"), parse_query("fire AND berlin")));
}

TEST_CASE("phrases and normalization") {
    QueryPtr q = parse_query("\"house fire\" berlin");
    REQUIRE(q->kind == QueryNode::Kind::And);
    CHECK(q->children[0]->kind == QueryNode::Kind::Phrase);
    CHECK(q->children[0]->text == "house fire");

    CHECK(query_equal(parse_query("NOT NOT fire"), parse_query("fire")));
    // nested same-kind groups flatten
    CHECK(parse_query("a AND b AND c")->children.size() == 3);
    CHECK(parse_query("(a OR b) OR c")->children.size() == 3);
}

TEST_CASE("parse errors name a position") {
    CHECK_THROWS_AS((void)parse_query(""), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("   "), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("(fire"), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("fire)"), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("fire AND"), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("OR fire"), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("\"\""), QueryParseError);
    CHECK_THROWS_AS((void)parse_query("\"unterminated"), QueryParseError);

    try {
        (void)parse_query("fire AND");
        FAIL("expected parse error");
    } catch (const QueryParseError& e) {
        CHECK(e.position() == 5);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("print and reparse yields an equal tree") {
    std::vector<std::string> vocab = {"fire", "flood", "berlin", "hamburg", "storm", "drill"};
    testing::QueryGenerator gen(vocab, 42);
    for (int i = 0; i < 300; ++i) {
        QueryPtr q = gen.generate(6);
        QueryPtr back = parse_query(query_to_string(q));
        CHECK(query_equal(q, back));
    }
}

TEST_CASE("reference evaluator semantics") {
    CHECK(evaluate_match(parse_query("fire"), "House fire in Berlin"));
    CHECK_FALSE(evaluate_match(parse_query("\"house fire\""), "fire house nearby"));
    CHECK_FALSE(evaluate_match(parse_query("fire AND NOT drill"), "fire drill today"));
    CHECK(evaluate_match(parse_query("fire AND NOT drill"), "fire in the harbor"));
    CHECK(evaluate_match(parse_query("fire OR flood"), "flood warning"));
    CHECK_FALSE(evaluate_match(parse_query("fire"), "firefighters on scene"));
}

TEST_CASE("dnf of simple shapes") {
    Dnf d1 = to_dnf(parse_query("a OR b"));
    REQUIRE(d1.disjuncts.size() == 2);
    CHECK(d1.disjuncts[0].positive.size() == 1);
    CHECK(d1.disjuncts[0].negative.empty());

    Dnf d2 = to_dnf(parse_query("(a OR b) AND c"));
    REQUIRE(d2.disjuncts.size() == 2);
    for (const auto& c : d2.disjuncts) CHECK(c.positive.size() == 2);

    // equal disjuncts are deduplicated
    CHECK(to_dnf(parse_query("a OR a")).disjuncts.size() == 1);
}

TEST_CASE("pure-negative queries are rejected") {
    CHECK_THROWS_AS((void)to_dnf(parse_query("NOT a")), UnsupportedQueryError);
    CHECK_THROWS_AS((void)to_dnf(parse_query("NOT a AND NOT b")), UnsupportedQueryError);
    CHECK_THROWS_AS((void)to_dnf(parse_query("a OR NOT b")), UnsupportedQueryError);
    CHECK_NOTHROW((void)to_dnf(parse_query("a AND NOT b")));
}

TEST_CASE("dnf fan-out guard") {
    // 7 binary ORs conjoined expand to 128 disjuncts
    std::string q;
    for (int i = 0; i < 7; ++i) {
        if (!q.empty()) q += " AND ";
        q += "(a" + std::to_string(i) + " OR b" + std::to_string(i) + ")";
    }
    CHECK_THROWS_AS((void)to_dnf(parse_query(q)), UnsupportedQueryError);
}

TEST_CASE("dnf is truth-table equivalent to the tree") {
    std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
    testing::QueryGenerator gen(vocab, 1234, 0.1);
    int checked = 0;
    while (checked < 200) {
        QueryPtr q = gen.generate(6);
        Dnf dnf;
        try {
            dnf = to_dnf(q);
        } catch (const UnsupportedQueryError&) {
            continue; // pure-negative draw
        }
        std::vector<std::pair<bool, std::string>> literals;
        testing::collect_literals(q, literals);
        REQUIRE(literals.size() <= 6);
        for (std::size_t mask = 0; mask < (1u << literals.size()); ++mask) {
            testing::Assignment assignment;
            for (std::size_t bit = 0; bit < literals.size(); ++bit) {
                assignment[literals[bit]] = (mask >> bit) & 1;
            }
            CHECK(testing::eval_ast(q, assignment) == testing::eval_dnf(dnf, assignment));
        }
        ++checked;
    }
}

TEST_CASE("rewrite: full-boolean platforms get one request") {
    Dnf dnf = to_dnf(parse_query("berlin"));
    RewritePlan plan = rewrite_for_platform(dnf, full_caps());
    REQUIRE(plan.nativeRequests.size() == 1);
    CHECK(plan.nativeRequests[0].keywordString == "berlin");
    CHECK_FALSE(plan.postFilter.mustMatch);
    CHECK(plan.estimatedRequestUnits == 1);

    Dnf fanout = to_dnf(parse_query("(a OR b) AND c"));
    RewritePlan single = rewrite_for_platform(fanout, full_caps());
    CHECK(single.nativeRequests.size() == 1);
}

TEST_CASE("rewrite: conjunction-only platforms fan out per disjunct") {
    Dnf dnf = to_dnf(parse_query("(a OR b) AND c"));
    RewritePlan plan = rewrite_for_platform(dnf, and_only_caps());
    CHECK(plan.nativeRequests.size() == 2);
    CHECK(plan.estimatedRequestUnits == 2);
    // no negatives or phrases: the conjunctions already say everything
    CHECK_FALSE(plan.postFilter.mustMatch);

    Dnf negative = to_dnf(parse_query("flood AND NOT drill"));
    RewritePlan filtered = rewrite_for_platform(negative, and_only_caps());
    REQUIRE(filtered.nativeRequests.size() == 1);
    CHECK(filtered.nativeRequests[0].keywordString == "flood");
    REQUIRE(filtered.postFilter.mustMatch);
    CHECK_FALSE(evaluate_match(filtered.postFilter.mustMatch, "flood drill today"));
    CHECK(evaluate_match(filtered.postFilter.mustMatch, "flood in town"));

    // phrases demote to their words natively, exactness stays local
    Dnf phrase = to_dnf(parse_query("\"house fire\" AND berlin"));
    RewritePlan demoted = rewrite_for_platform(phrase, and_only_caps());
    REQUIRE(demoted.nativeRequests.size() == 1);
    CHECK(demoted.nativeRequests[0].keywordString.find("house") != std::string::npos);
    CHECK(demoted.nativeRequests[0].keywordString.find('"') == std::string::npos);
    REQUIRE(demoted.postFilter.mustMatch);
}

TEST_CASE("rewrite: tag-only platforms take one distinct term per request") {
    Dnf dnf = to_dnf(parse_query("(fire AND berlin) OR (fire AND hamburg)"));
    RewritePlan plan = rewrite_for_platform(dnf, tag_only_caps());
    CHECK(plan.nativeRequests.size() == 3); // fire, berlin, hamburg
    REQUIRE(plan.postFilter.mustMatch);

    CHECK_THROWS_AS(
        (void)rewrite_for_platform(to_dnf(parse_query("\"house fire\"")), tag_only_caps()),
        CapabilityError);
}

TEST_CASE("rewrite: geo and time ride native iff supported") {
    GeoCircle circle{52.52, 13.4, 10.0};
    TimeWindow window{1000, 2000};
    Dnf dnf = to_dnf(parse_query("fire"));

    PlatformCapabilities native = full_caps();
    native.nativeGeoFilter = true;
    native.nativeTimeFilter = true;
    RewritePlan native_plan = rewrite_for_platform(dnf, native, circle, window);
    CHECK(native_plan.nativeRequests[0].geo.has_value());
    CHECK(native_plan.nativeRequests[0].window.has_value());
    CHECK_FALSE(native_plan.postFilter.geo);
    CHECK_FALSE(native_plan.postFilter.window);

    RewritePlan local_plan = rewrite_for_platform(dnf, and_only_caps(), circle, window);
    CHECK_FALSE(local_plan.nativeRequests[0].geo.has_value());
    CHECK(local_plan.postFilter.geo.has_value());
    CHECK(local_plan.postFilter.window.has_value());
}

TEST_CASE("rewrite rejects an empty plan") {
    CHECK_THROWS_AS((void)rewrite_for_platform(Dnf{}, full_caps()), InvalidRequestError);
}

TEST_CASE("estimated cost multiplies requests by pages") {
    Dnf dnf = to_dnf(parse_query("a OR b OR c"));
    RewritePlan fanned = rewrite_for_platform(dnf, and_only_caps());
    CHECK(estimate_cost(fanned, 1) == 3);
    CHECK(estimate_cost(fanned, 2) == 6);

    RewritePlan single = rewrite_for_platform(dnf, full_caps());
    CHECK(estimate_cost(single, 2) == 2); // pagesPerRequest, one request

    CHECK_THROWS_AS((void)estimate_cost(fanned, 0), InvalidRequestError);
}

TEST_CASE("cost never decreases when adding an OR disjunct") {
    std::string q = "alpha";
    std::size_t previous = 0;
    for (int i = 0; i < 8; ++i) {
        RewritePlan plan = rewrite_for_platform(to_dnf(parse_query(q)), and_only_caps());
        CHECK(plan.estimatedRequestUnits >= previous);
        previous = plan.estimatedRequestUnits;
        q += " OR kw" + std::to_string(i);
    }
    CHECK(previous == 8);
}

TEST_CASE("plan execution over a text corpus matches the evaluator") {
    std::vector<std::string> corpus = {
        "fire in berlin tonight",          "hamburg storm surge warning",
        "berlin drill announcement",        "quiet day on the river",
        "storm and fire drill in hamburg",  "fire brigade exercise",
        "big fire near hamburg harbor",     "berlin marathon traffic",
    };
    std::vector<std::string> vocab = {"fire", "storm", "berlin", "hamburg", "drill"};
    testing::QueryGenerator gen(vocab, 99, 0.1);

    auto native_and_match = [](const std::string& request, const std::string& doc) {
        std::size_t start = 0;
        while (start <= request.size()) {
            std::size_t space = request.find(' ', start);
            std::string token = request.substr(
                start, space == std::string::npos ? space : space - start);
            if (!token.empty() && !evaluate_match(QueryNode::term(token), doc)) return false;
            if (space == std::string::npos) break;
            start = space + 1;
        }
        return true;
    };

    int checked = 0;
    while (checked < 150) {
        QueryPtr q = gen.generate(5);
        Dnf dnf;
        try {
            dnf = to_dnf(q);
        } catch (const UnsupportedQueryError&) {
            continue;
        }
        for (bool full : {true, false}) {
            RewritePlan plan = rewrite_for_platform(dnf, full ? full_caps() : and_only_caps());
            std::set<std::size_t> returned;
            for (const auto& request : plan.nativeRequests) {
                QueryPtr native_ast = full ? parse_query(request.keywordString) : nullptr;
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    bool matches = full ? evaluate_match(native_ast, corpus[i])
                                        : native_and_match(request.keywordString, corpus[i]);
                    if (!matches) continue;
                    if (plan.postFilter.mustMatch &&
                        !evaluate_match(plan.postFilter.mustMatch, corpus[i])) {
                        continue;
                    }
                    returned.insert(i);
                }
            }
            std::set<std::size_t> expected;
            for (std::size_t i = 0; i < corpus.size(); ++i) {
                if (evaluate_match(q, corpus[i])) expected.insert(i);
            }
            CHECK(returned == expected);
        }
        ++checked;
    }
}
