#include "smapi/query.hpp"

#include <cctype>

#include "smapi/errors.hpp"
#include "smapi/text.hpp"

namespace smapi {

QueryPtr QueryNode::term(std::string t) {
    return std::make_shared<QueryNode>(QueryNode{Kind::Term, std::move(t), {}});
}

QueryPtr QueryNode::phrase(std::string t) {
    return std::make_shared<QueryNode>(QueryNode{Kind::Phrase, std::move(t), {}});
}

namespace {

// keep built trees normalized: nested same-kind groups flatten away
QueryPtr make_group(QueryNode::Kind kind, std::vector<QueryPtr> children) {
    if (children.size() == 1) return children.front();
    std::vector<QueryPtr> flat;
    for (auto& c : children) {
        if (c->kind == kind) {
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        } else {
            flat.push_back(std::move(c));
        }
    }
    return std::make_shared<QueryNode>(QueryNode{kind, {}, std::move(flat)});
}

} // namespace

QueryPtr QueryNode::conjunction(std::vector<QueryPtr> children) {
    return make_group(Kind::And, std::move(children));
}

QueryPtr QueryNode::disjunction(std::vector<QueryPtr> children) {
    return make_group(Kind::Or, std::move(children));
}

QueryPtr QueryNode::negation(QueryPtr child) {
    // NOT NOT x == x
    if (child->kind == Kind::Not) return child->children.front();
    return std::make_shared<QueryNode>(QueryNode{Kind::Not, {}, {std::move(child)}});
}

bool query_equal(const QueryPtr& a, const QueryPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->text != b->text) return false;
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!query_equal(a->children[i], b->children[i])) return false;
    }
    return true;
}

namespace {

struct Token {
    enum class Type { Term, Phrase, And, Or, Not, LParen, RParen, End };
    Type type;
    std::string text;
    std::size_t position;
};

class Lexer {
public:
    explicit Lexer(std::string_view input) : input_(input) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < input_.size() &&
               std::isspace(static_cast<unsigned char>(input_[pos_]))) {
            ++pos_;
        }
        std::size_t start = pos_;
        if (pos_ >= input_.size()) {
            current_ = {Token::Type::End, "", start};
            return;
        }
        char c = input_[pos_];
        if (c == '(') {
            ++pos_;
            current_ = {Token::Type::LParen, "(", start};
            return;
        }
        if (c == ')') {
            ++pos_;
            current_ = {Token::Type::RParen, ")", start};
            return;
        }
        if (c == '"') {
            ++pos_;
            std::size_t body = pos_;
            while (pos_ < input_.size() && input_[pos_] != '"') ++pos_;
            if (pos_ >= input_.size()) {
                throw QueryParseError("unterminated phrase", start);
            }
            std::string text(input_.substr(body, pos_ - body));
            ++pos_; // closing quote
            if (text.empty()) throw QueryParseError("empty phrase", start);
            current_ = {Token::Type::Phrase, std::move(text), start};
            return;
        }
        while (pos_ < input_.size()) {
            char d = input_[pos_];
            if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
                d == '"') {
                break;
            }
            ++pos_;
        }
        std::string word(input_.substr(start, pos_ - start));
        if (word == "AND") {
            current_ = {Token::Type::And, word, start};
        } else if (word == "OR") {
            current_ = {Token::Type::Or, word, start};
        } else if (word == "NOT") {
            current_ = {Token::Type::Not, word, start};
        } else {
            current_ = {Token::Type::Term, word, start};
        }
    }

    std::string_view input_;
    std::size_t pos_ = 0;
    Token current_{Token::Type::End, "", 0};
};

class Parser {
public:
    explicit Parser(std::string_view input) : lexer_(input) {}

    QueryPtr parse() {
        QueryPtr root = parse_or();
        const Token& t = lexer_.peek();
        if (t.type != Token::Type::End) {
            throw QueryParseError("unexpected '" + t.text + "'", t.position);
        }
        return root;
    }

private:
    static bool starts_operand(Token::Type t) {
        return t == Token::Type::Term || t == Token::Type::Phrase ||
               t == Token::Type::Not || t == Token::Type::LParen;
    }

    QueryPtr parse_or() {
        std::vector<QueryPtr> children;
        children.push_back(parse_and());
        while (lexer_.peek().type == Token::Type::Or) {
            Token op = lexer_.take();
            if (!starts_operand(lexer_.peek().type)) {
                throw QueryParseError("dangling OR operator", op.position);
            }
            children.push_back(parse_and());
        }
        return QueryNode::disjunction(std::move(children));
    }

    QueryPtr parse_and() {
        std::vector<QueryPtr> children;
        children.push_back(parse_unary());
        for (;;) {
            Token::Type next = lexer_.peek().type;
            if (next == Token::Type::And) {
                Token op = lexer_.take();
                if (!starts_operand(lexer_.peek().type)) {
                    throw QueryParseError("dangling AND operator", op.position);
                }
                children.push_back(parse_unary());
            } else if (starts_operand(next)) {
                // adjacency means AND
                children.push_back(parse_unary());
            } else {
                break;
            }
        }
        return QueryNode::conjunction(std::move(children));
    }

    QueryPtr parse_unary() {
        if (lexer_.peek().type == Token::Type::Not) {
            Token op = lexer_.take();
            if (!starts_operand(lexer_.peek().type)) {
                throw QueryParseError("dangling NOT operator", op.position);
            }
            return QueryNode::negation(parse_unary());
        }
        return parse_primary();
    }

    QueryPtr parse_primary() {
        Token t = lexer_.take();
        switch (t.type) {
        case Token::Type::Term:
            return QueryNode::term(std::move(t.text));
        case Token::Type::Phrase:
            return QueryNode::phrase(std::move(t.text));
        case Token::Type::LParen: {
            QueryPtr inner = parse_or();
            Token close = lexer_.take();
            if (close.type != Token::Type::RParen) {
                throw QueryParseError("unbalanced parentheses", t.position);
            }
            return inner;
        }
        case Token::Type::RParen:
            throw QueryParseError("unbalanced parentheses", t.position);
        default:
            throw QueryParseError("expected a term, phrase or group", t.position);
        }
    }

    Lexer lexer_;
};

int precedence(QueryNode::Kind kind) {
    switch (kind) {
    case QueryNode::Kind::Or: return 0;
    case QueryNode::Kind::And: return 1;
    case QueryNode::Kind::Not: return 2;
    default: return 3;
    }
}

void print_node(const QueryPtr& node, int parent_precedence, std::string& out) {
    int prec = precedence(node->kind);
    bool parens = prec < parent_precedence;
    if (parens) out += '(';
    switch (node->kind) {
    case QueryNode::Kind::Term:
        out += node->text;
        break;
    case QueryNode::Kind::Phrase:
        out += '"';
        out += node->text;
        out += '"';
        break;
    case QueryNode::Kind::Not:
        out += "NOT ";
        print_node(node->children.front(), prec + 1, out);
        break;
    case QueryNode::Kind::And:
        for (std::size_t i = 0; i < node->children.size(); ++i) {
            if (i) out += " AND ";
            print_node(node->children[i], prec + 1, out);
        }
        break;
    case QueryNode::Kind::Or:
        for (std::size_t i = 0; i < node->children.size(); ++i) {
            if (i) out += " OR ";
            print_node(node->children[i], prec + 1, out);
        }
        break;
    }
    if (parens) out += ')';
}

} // namespace

QueryPtr parse_query(std::string_view input) {
    std::size_t first = 0;
    while (first < input.size() &&
           std::isspace(static_cast<unsigned char>(input[first]))) {
        ++first;
    }
    if (first == input.size()) throw QueryParseError("empty query", 0);
    return Parser(input).parse();
}

std::string query_to_string(const QueryPtr& ast) {
    std::string out;
    print_node(ast, 0, out);
    return out;
}

bool evaluate_match(const QueryPtr& ast, std::string_view document_text) {
    switch (ast->kind) {
    case QueryNode::Kind::Term:
        return text::contains_term(document_text, ast->text);
    case QueryNode::Kind::Phrase:
        return text::contains_phrase(document_text, ast->text);
    case QueryNode::Kind::Not:
        return !evaluate_match(ast->children.front(), document_text);
    case QueryNode::Kind::And:
        for (const auto& c : ast->children) {
            if (!evaluate_match(c, document_text)) return false;
        }
        return true;
    case QueryNode::Kind::Or:
        for (const auto& c : ast->children) {
            if (evaluate_match(c, document_text)) return true;
        }
        return false;
    }
    return false;
}

} // namespace smapi
