/*
 * Copyright (c) 2026 the fedql authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fedql/errors.hpp"
#include "fedql/sparql/ast.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::sparql {

namespace detail {

struct Token {
    enum class Kind {
        Eof, Iri, PName, Var, Literal, Integer, Decimal, Ident, BlankLabel,
        LBrace, RBrace, LParen, RParen, Dot, Semicolon, Comma, Star,
        Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang, Plus, Minus, Slash,
        Pipe, Caret
    };
    Kind kind = Kind::Eof;
    std::string text;    // ident/pname/var/iri/number text
    std::string lexical; // literal body, decoded
    std::string lang;    // literal @tag
    std::string dt_iri;  // literal ^^<iri>
    std::string dt_pname;// literal ^^pfx:local
    int line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            Token t = next();
            bool eof = t.kind == Token::Kind::Eof;
            out.push_back(std::move(t));
            if (eof) return out;
        }
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(line_, col_, msg); }

    char peek(size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (pos_ < text_.size() && peek() != '\n') advance();
            } else {
                return;
            }
        }
    }

    Token make(Token::Kind k, std::string text = {}) {
        Token t;
        t.kind = k;
        t.text = std::move(text);
        t.line = tok_line_;
        t.col = tok_col_;
        return t;
    }

    // A '<' opens an IRI only if a '>' follows with no whitespace or quote in
    // between; otherwise it is a comparison operator.
    bool looks_like_iri() const {
        for (size_t i = pos_ + 1; i < text_.size(); ++i) {
            char c = text_[i];
            if (c == '>') return true;
            if (c == '<' || c == '"' || c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
                static_cast<unsigned char>(c) < 0x20)
                return false;
        }
        return false;
    }

    static bool name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }
    static bool local_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '%';
    }

    Token next() {
        skip_trivia();
        tok_line_ = line_;
        tok_col_ = col_;
        if (pos_ >= text_.size()) return make(Token::Kind::Eof);
        char c = peek();

        if (c == '<') {
            if (looks_like_iri()) return lex_iri();
            advance();
            if (peek() == '=') {
                advance();
                return make(Token::Kind::Le);
            }
            return make(Token::Kind::Lt);
        }
        if (c == '"') return lex_literal();
        if (c == '?') return lex_var();
        if (c == '_' && peek(1) == ':') return lex_blank();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number();
        if (name_start(c) || c == ':') return lex_name();

        advance();
        switch (c) {
        case '{': return make(Token::Kind::LBrace);
        case '}': return make(Token::Kind::RBrace);
        case '(': return make(Token::Kind::LParen);
        case ')': return make(Token::Kind::RParen);
        case '.': return make(Token::Kind::Dot);
        case ';': return make(Token::Kind::Semicolon);
        case ',': return make(Token::Kind::Comma);
        case '*': return make(Token::Kind::Star);
        case '=': return make(Token::Kind::Eq);
        case '+': return make(Token::Kind::Plus);
        case '-': return make(Token::Kind::Minus);
        case '/': return make(Token::Kind::Slash);
        case '^': return make(Token::Kind::Caret);
        case '>':
            if (peek() == '=') {
                advance();
                return make(Token::Kind::Ge);
            }
            return make(Token::Kind::Gt);
        case '!':
            if (peek() == '=') {
                advance();
                return make(Token::Kind::Ne);
            }
            return make(Token::Kind::Bang);
        case '&':
            if (peek() == '&') {
                advance();
                return make(Token::Kind::AndAnd);
            }
            fail("single '&'");
        case '|':
            if (peek() == '|') {
                advance();
                return make(Token::Kind::OrOr);
            }
            return make(Token::Kind::Pipe);
        default:
            fail(std::string("unexpected character '") + c + "'");
        }
    }

    Token lex_iri() {
        advance(); // '<'
        std::string value;
        while (pos_ < text_.size() && peek() != '>') value.push_back(advance());
        if (pos_ >= text_.size()) fail("unterminated IRI");
        advance(); // '>'
        return make(Token::Kind::Iri, value);
    }

    Token lex_var() {
        advance(); // '?'
        std::string name;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            name.push_back(advance());
        if (name.empty()) fail("empty variable name");
        return make(Token::Kind::Var, name);
    }

    Token lex_blank() {
        advance();
        advance(); // '_:'
        std::string label;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(peek())))
            label.push_back(advance());
        if (label.empty()) fail("empty blank node label");
        return make(Token::Kind::BlankLabel, label);
    }

    Token lex_number() {
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            digits.push_back(advance());
            while (std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
            return make(Token::Kind::Decimal, digits);
        }
        return make(Token::Kind::Integer, digits);
    }

    Token lex_name() {
        std::string name;
        while (name_char(peek())) name.push_back(advance());
        if (peek() != ':') return make(Token::Kind::Ident, name);
        advance(); // ':'
        std::string local;
        while (true) {
            char c = peek();
            if (local_char(c)) {
                local.push_back(advance());
            } else if (c == '.' && local_char(peek(1))) {
                // dots allowed inside a local name, never at its end
                local.push_back(advance());
            } else {
                break;
            }
        }
        Token t = make(Token::Kind::PName, name + ":" + local);
        return t;
    }

    Token lex_literal() {
        advance(); // '"'
        std::string lexical;
        while (true) {
            if (pos_ >= text_.size()) fail("unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("dangling escape");
                char e = advance();
                switch (e) {
                case 't': lexical += '\t'; break;
                case 'n': lexical += '\n'; break;
                case 'r': lexical += '\r'; break;
                case '"': lexical += '"'; break;
                case '\\': lexical += '\\'; break;
                case 'u':
                case 'U': {
                    int digits = e == 'u' ? 4 : 8;
                    uint32_t cp = 0;
                    for (int i = 0; i < digits; ++i) {
                        int v = util::hex_value(pos_ < text_.size() ? advance() : '\0');
                        if (v < 0) fail("bad \\u escape");
                        cp = (cp << 4) | static_cast<uint32_t>(v);
                    }
                    util::append_utf8(lexical, cp);
                    break;
                }
                default: fail(std::string("unknown escape '\\") + e + "'");
                }
            } else {
                lexical += c;
            }
        }
        Token t = make(Token::Kind::Literal);
        t.lexical = std::move(lexical);
        if (peek() == '@') {
            advance();
            std::string tag;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')
                tag.push_back(advance());
            if (tag.empty()) fail("empty language tag");
            t.lang = std::move(tag);
        } else if (peek() == '^' && peek(1) == '^') {
            advance();
            advance();
            if (peek() == '<') {
                Token dt = lex_iri();
                t.dt_iri = std::move(dt.text);
            } else if (name_start(peek()) || peek() == ':') {
                Token dt = lex_name();
                if (dt.kind != Token::Kind::PName) fail("expected datatype IRI");
                t.dt_pname = std::move(dt.text);
            } else {
                fail("expected datatype IRI after '^^'");
            }
        }
        return t;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    int tok_line_ = 1, tok_col_ = 1;
};

} // namespace detail

/// Recursive-descent parser for the supported SPARQL subset. Prefixed names
/// are expanded during the parse; recognized constructs outside the subset
/// raise UnsupportedFeature rather than a plain syntax error.
class QueryParser {
    using Token = detail::Token;
    using TK = detail::Token::Kind;

public:
    static QueryAst parse(const std::string& text) { return QueryParser(text).run(); }

private:
    explicit QueryParser(const std::string& text) : toks_(detail::Lexer(text).run()) {}

    // Keywords recognized as SPARQL but outside the subset. SELECT inside a
    // group means a subquery, so the query forms are listed here too.
    static const std::set<std::string>& reserved() {
        static const std::set<std::string> kws = {
            "UNION",  "GRAPH",  "BIND",   "MINUS",   "EXISTS", "DESCRIBE", "FROM",
            "GROUP",  "HAVING", "COUNT",  "SUM",     "AVG",    "MIN",      "MAX",
            "SAMPLE", "GROUP_CONCAT",     "REDUCED", "INSERT", "DELETE",   "LOAD",
            "CLEAR",  "CREATE", "DROP",   "WITH",    "NAMED",  "SELECT",   "ASK",
            "CONSTRUCT"};
        return kws;
    }

    const Token& peek(size_t k = 0) const {
        size_t i = pos_ + k;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != TK::Eof) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw SyntaxError(t.line, t.col, msg);
    }

    bool peek_kw(const std::string& kw, size_t k = 0) const {
        const Token& t = peek(k);
        return t.kind == TK::Ident && util::to_upper(t.text) == kw;
    }

    bool accept_kw(const std::string& kw) {
        if (!peek_kw(kw)) return false;
        next();
        return true;
    }

    void expect_kw(const std::string& kw) {
        if (!accept_kw(kw)) fail(peek(), "expected '" + kw + "'");
    }

    void expect(TK kind, const std::string& what) {
        if (peek().kind != kind) fail(peek(), "expected " + what);
        next();
    }

    void check_not_reserved(const Token& t) const {
        if (t.kind == TK::Ident) {
            auto kw = util::to_upper(t.text);
            if (reserved().count(kw)) throw UnsupportedFeature(kw);
        }
    }

    QueryAst run() {
        parse_prologue();
        const Token& head = peek();
        if (peek_kw("SELECT")) {
            parse_select();
        } else if (peek_kw("CONSTRUCT")) {
            parse_construct();
        } else if (peek_kw("ASK")) {
            parse_ask();
        } else {
            check_not_reserved(head);
            fail(head, "expected SELECT, CONSTRUCT or ASK");
        }
        if (peek().kind != TK::Eof) {
            check_not_reserved(peek());
            fail(peek(), "trailing content after query");
        }
        ast_.prefixes = prefixes_;
        attach_projection_warnings();
        return std::move(ast_);
    }

    void parse_prologue() {
        while (peek_kw("PREFIX")) {
            next();
            const Token& name = peek();
            if (name.kind != TK::PName) fail(name, "expected prefix name");
            auto colon = name.text.find(':');
            if (colon == std::string::npos || colon + 1 != name.text.size())
                fail(name, "expected 'prefix:' before IRI");
            std::string pfx = name.text.substr(0, colon);
            next();
            const Token& iri = peek();
            if (iri.kind != TK::Iri) fail(iri, "expected IRI in PREFIX declaration");
            prefixes_[pfx] = iri.text;
            next();
        }
        if (peek_kw("BASE")) throw UnsupportedFeature("BASE");
    }

    void parse_select() {
        next(); // SELECT
        ast_.kind = QueryAst::Kind::Select;
        if (accept_kw("DISTINCT")) ast_.distinct = true;
        if (peek_kw("REDUCED")) throw UnsupportedFeature("REDUCED");
        if (peek().kind == TK::Star) {
            next();
            ast_.select_star = true;
        } else if (peek().kind == TK::Var) {
            while (peek().kind == TK::Var) ast_.projection.push_back(next().text);
        } else if (peek().kind == TK::LParen) {
            // (expr AS ?v) projections imply expressions/aggregates
            throw UnsupportedFeature("expression projection");
        } else {
            fail(peek(), "expected projection variables or '*'");
        }
        if (peek_kw("FROM")) throw UnsupportedFeature("FROM");
        expect_kw("WHERE");
        ast_.where = parse_group(false);
        parse_modifiers();
    }

    void parse_construct() {
        next(); // CONSTRUCT
        ast_.kind = QueryAst::Kind::Construct;
        expect(TK::LBrace, "'{' opening the template");
        parse_triples_block(ast_.construct_template, /*template_mode=*/true);
        expect(TK::RBrace, "'}' closing the template");
        if (peek_kw("FROM")) throw UnsupportedFeature("FROM");
        expect_kw("WHERE");
        ast_.where = parse_group(false);
        parse_modifiers();
    }

    void parse_ask() {
        next(); // ASK
        ast_.kind = QueryAst::Kind::Ask;
        accept_kw("WHERE");
        ast_.where = parse_group(false);
    }

    GroupPattern parse_group(bool inside_service) {
        expect(TK::LBrace, "'{'");
        GroupPattern group;
        while (true) {
            const Token& t = peek();
            if (t.kind == TK::RBrace) {
                next();
                return group;
            }
            if (t.kind == TK::Eof) fail(t, "unterminated group, expected '}'");

            if (t.kind == TK::LBrace) {
                reject_nested_group();
            } else if (peek_kw("FILTER")) {
                group.elements.push_back(parse_filter());
            } else if (peek_kw("OPTIONAL")) {
                next();
                GroupPattern::Element el;
                el.kind = GroupPattern::Element::Kind::Optional;
                el.body.push_back(parse_group(inside_service));
                group.elements.push_back(std::move(el));
            } else if (peek_kw("SERVICE")) {
                const Token& kw = peek();
                if (inside_service) fail(kw, "nested SERVICE is not allowed");
                next();
                group.elements.push_back(parse_service());
            } else if (peek_kw("VALUES")) {
                next();
                group.elements.push_back(parse_values());
            } else if (t.kind == TK::Ident) {
                check_not_reserved(t);
                fail(t, "unexpected '" + t.text + "' in group");
            } else {
                // a triples block; merge consecutive statements into one BGP
                GroupPattern::Element el;
                el.kind = GroupPattern::Element::Kind::Triples;
                parse_triples_block(el.triples, /*template_mode=*/false);
                if (el.triples.empty()) fail(peek(), "expected a graph pattern");
                group.elements.push_back(std::move(el));
            }
        }
    }

    // `{ {...} UNION {...} }` and other nested-group forms are outside the
    // subset; classify UNION precisely so it never misparses silently.
    [[noreturn]] void reject_nested_group() {
        size_t i = pos_;
        int depth = 0;
        while (i < toks_.size() && toks_[i].kind != TK::Eof) {
            if (toks_[i].kind == TK::LBrace) ++depth;
            if (toks_[i].kind == TK::RBrace && --depth == 0) {
                ++i;
                break;
            }
            ++i;
        }
        if (i < toks_.size() && toks_[i].kind == TK::Ident &&
            util::to_upper(toks_[i].text) == "UNION")
            throw UnsupportedFeature("UNION");
        throw UnsupportedFeature("nested group pattern");
    }

    GroupPattern::Element parse_filter() {
        next(); // FILTER
        if (peek_kw("EXISTS") || peek_kw("NOT")) throw UnsupportedFeature("EXISTS");
        GroupPattern::Element el;
        el.kind = GroupPattern::Element::Kind::Filter;
        if (peek().kind == TK::LParen) {
            next();
            el.filter = parse_expr();
            expect(TK::RParen, "')' closing FILTER");
        } else if (peek().kind == TK::Ident) {
            // FILTER regex(...) — bare builtin call form
            el.filter = parse_primary();
        } else {
            fail(peek(), "expected '(' after FILTER");
        }
        return el;
    }

    GroupPattern::Element parse_service() {
        GroupPattern::Element el;
        el.kind = GroupPattern::Element::Kind::Service;
        if (accept_kw("SILENT")) el.service_silent = true;
        const Token& t = peek();
        if (t.kind == TK::Iri) {
            el.service_endpoint = next().text;
        } else if (t.kind == TK::PName) {
            el.service_endpoint = expand_pname(next());
        } else if (t.kind == TK::Var) {
            throw UnsupportedFeature("SERVICE with a variable endpoint");
        } else {
            fail(t, "expected SERVICE endpoint IRI");
        }
        el.body.push_back(parse_group(true));
        return el;
    }

    GroupPattern::Element parse_values() {
        GroupPattern::Element el;
        el.kind = GroupPattern::Element::Kind::Values;
        bool parenthesized = false;
        if (peek().kind == TK::Var) {
            el.values_vars.push_back(next().text);
        } else if (peek().kind == TK::LParen) {
            parenthesized = true;
            next();
            while (peek().kind == TK::Var) el.values_vars.push_back(next().text);
            if (el.values_vars.empty()) fail(peek(), "expected variables in VALUES");
            expect(TK::RParen, "')'");
        } else {
            fail(peek(), "expected variable list after VALUES");
        }
        expect(TK::LBrace, "'{' opening VALUES rows");
        while (peek().kind != TK::RBrace) {
            std::vector<std::optional<Term>> row;
            if (parenthesized) {
                expect(TK::LParen, "'(' opening a VALUES row");
                while (peek().kind != TK::RParen) row.push_back(parse_values_cell());
                next(); // ')'
            } else {
                row.push_back(parse_values_cell());
            }
            if (row.size() != el.values_vars.size())
                fail(peek(), "VALUES row arity " + std::to_string(row.size()) +
                                 " does not match " + std::to_string(el.values_vars.size()) +
                                 " variables");
            el.values_rows.push_back(std::move(row));
        }
        next(); // '}'
        return el;
    }

    std::optional<Term> parse_values_cell() {
        if (peek_kw("UNDEF")) {
            next();
            return std::nullopt;
        }
        return parse_data_term();
    }

    // s p o (';' p o)* (',' o)* '.'  — the abbreviations expand here.
    void parse_triples_block(std::vector<TriplePattern>& out, bool template_mode) {
        while (true) {
            const Token& t = peek();
            if (t.kind == TK::RBrace || t.kind == TK::Eof) return;
            if (t.kind == TK::Ident || t.kind == TK::LBrace) return; // next element kind
            PatternTerm subject = parse_pattern_term(Position::Subject, template_mode);
            while (true) {
                PatternTerm predicate = parse_pattern_term(Position::Predicate, template_mode);
                check_property_path();
                while (true) {
                    PatternTerm object = parse_pattern_term(Position::Object, template_mode);
                    out.push_back({subject, predicate, object});
                    if (peek().kind == TK::Comma) {
                        next();
                        continue;
                    }
                    break;
                }
                if (peek().kind == TK::Semicolon) {
                    next();
                    continue;
                }
                break;
            }
            if (peek().kind == TK::Dot) {
                next();
            } else if (peek().kind == TK::RBrace || starts_group_element()) {
                // the final '.' is optional before '}' or the next element
                return;
            } else {
                check_not_reserved(peek());
                fail(peek(), "expected '.' after triple pattern");
            }
        }
    }

    bool starts_group_element() const {
        return peek_kw("FILTER") || peek_kw("OPTIONAL") || peek_kw("SERVICE") || peek_kw("VALUES");
    }

    void check_property_path() {
        switch (peek().kind) {
        case TK::Slash:
        case TK::Pipe:
        case TK::Caret:
        case TK::Star:
        case TK::Plus:
            throw UnsupportedFeature("property path");
        default:
            return;
        }
    }

    enum class Position { Subject, Predicate, Object };

    PatternTerm parse_pattern_term(Position pos, bool template_mode) {
        const Token& t = peek();
        switch (t.kind) {
        case TK::Var:
            return Variable{next().text};
        case TK::Iri:
            return term_from(Term::iri(next().text));
        case TK::PName:
            return term_from(Term::iri(expand_pname(next())));
        case TK::BlankLabel: {
            if (pos == Position::Predicate) fail(t, "blank node cannot be a predicate");
            std::string label = next().text;
            if (template_mode) return Term::blank(label);
            // blank nodes in query patterns act as fresh variables
            return Variable{"_b_" + label};
        }
        case TK::Ident:
            if (t.text == "a" && pos == Position::Predicate) {
                next();
                return Term::iri(rdf::vocab::rdf_type);
            }
            if (util::to_upper(t.text) == "TRUE" || util::to_upper(t.text) == "FALSE") {
                if (pos != Position::Object) fail(t, "boolean literal only allowed as object");
                return Term::literal(util::to_lower(next().text), rdf::vocab::xsd_boolean);
            }
            check_not_reserved(t);
            fail(t, "unexpected '" + t.text + "' in triple pattern");
        case TK::Literal:
        case TK::Integer:
        case TK::Decimal: {
            if (pos == Position::Predicate) fail(t, "literal cannot be a predicate");
            if (pos == Position::Subject) fail(t, "literal cannot be a subject");
            return parse_data_term();
        }
        default:
            fail(t, "expected a term or variable");
        }
    }

    PatternTerm term_from(Term t) { return PatternTerm(std::move(t)); }

    // Ground term (IRIs, literals, numbers, booleans) — used by VALUES rows.
    Term parse_data_term() {
        const Token& t = peek();
        switch (t.kind) {
        case TK::Iri:
            return Term::iri(next().text);
        case TK::PName:
            return Term::iri(expand_pname(next()));
        case TK::Integer:
            return Term::literal(next().text, rdf::vocab::xsd_integer);
        case TK::Decimal:
            return Term::literal(next().text, rdf::vocab::xsd_decimal);
        case TK::Literal: {
            Token lit = next();
            if (!lit.lang.empty()) {
                try {
                    return Term::lang_literal(lit.lexical, lit.lang);
                } catch (const Error& e) {
                    fail(lit, e.what());
                }
            }
            if (!lit.dt_iri.empty()) return Term::literal(lit.lexical, lit.dt_iri);
            if (!lit.dt_pname.empty()) {
                Token dt = lit;
                dt.text = lit.dt_pname;
                return Term::literal(lit.lexical, expand_pname(dt));
            }
            return Term::literal(lit.lexical);
        }
        case TK::Ident: {
            auto kw = util::to_upper(t.text);
            if (kw == "TRUE" || kw == "FALSE") {
                next();
                return Term::literal(util::to_lower(kw), rdf::vocab::xsd_boolean);
            }
            check_not_reserved(t);
            fail(t, "expected a ground term");
        }
        default:
            fail(t, "expected a ground term");
        }
    }

    std::string expand_pname(const Token& t) {
        auto colon = t.text.find(':');
        std::string pfx = t.text.substr(0, colon);
        std::string local = t.text.substr(colon + 1);
        auto it = prefixes_.find(pfx);
        if (it == prefixes_.end()) fail(t, "undeclared prefix '" + pfx + ":'");
        return it->second + local;
    }

    // ---- expressions ----------------------------------------------------

    Expression parse_expr() { return parse_or(); }

    Expression parse_or() {
        Expression lhs = parse_and();
        while (peek().kind == TK::OrOr) {
            next();
            lhs = Expression::binary(Expression::Kind::Or, "||", std::move(lhs), parse_and());
        }
        return lhs;
    }

    Expression parse_and() {
        Expression lhs = parse_relational();
        while (peek().kind == TK::AndAnd) {
            next();
            lhs = Expression::binary(Expression::Kind::And, "&&", std::move(lhs),
                                     parse_relational());
        }
        return lhs;
    }

    Expression parse_relational() {
        Expression lhs = parse_additive();
        const char* op = nullptr;
        switch (peek().kind) {
        case TK::Eq: op = "="; break;
        case TK::Ne: op = "!="; break;
        case TK::Lt: op = "<"; break;
        case TK::Le: op = "<="; break;
        case TK::Gt: op = ">"; break;
        case TK::Ge: op = ">="; break;
        default: return lhs;
        }
        next();
        return Expression::binary(Expression::Kind::Compare, op, std::move(lhs),
                                  parse_additive());
    }

    Expression parse_additive() {
        Expression lhs = parse_multiplicative();
        while (peek().kind == TK::Plus || peek().kind == TK::Minus) {
            std::string op = next().kind == TK::Plus ? "+" : "-";
            lhs = Expression::binary(Expression::Kind::Arith, op, std::move(lhs),
                                     parse_multiplicative());
        }
        return lhs;
    }

    Expression parse_multiplicative() {
        Expression lhs = parse_unary();
        while (peek().kind == TK::Star || peek().kind == TK::Slash) {
            std::string op = next().kind == TK::Star ? "*" : "/";
            lhs = Expression::binary(Expression::Kind::Arith, op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    Expression parse_unary() {
        if (peek().kind == TK::Bang) {
            next();
            return Expression::unary(Expression::Kind::Not, parse_unary());
        }
        return parse_primary();
    }

    struct Builtin {
        const char* name;
        size_t arity;
    };

    static const Builtin* find_builtin(const std::string& upper) {
        static const Builtin table[] = {
            {"BOUND", 1},    {"STR", 1},   {"LANG", 1},  {"DATATYPE", 1}, {"CONTAINS", 2},
            {"STRSTARTS", 2}, {"REGEX", 2}, {"ISIRI", 1}, {"ISLITERAL", 1}};
        for (const auto& b : table)
            if (upper == b.name) return &b;
        return nullptr;
    }

    static std::string canonical_fn(const std::string& upper) {
        if (upper == "ISIRI") return "isIRI";
        if (upper == "ISLITERAL") return "isLiteral";
        return upper;
    }

    Expression parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case TK::LParen: {
            next();
            Expression e = parse_expr();
            expect(TK::RParen, "')'");
            return e;
        }
        case TK::Var:
            return Expression::var_ref(next().text);
        case TK::Ident: {
            auto upper = util::to_upper(t.text);
            if (upper == "TRUE" || upper == "FALSE") {
                next();
                return Expression::term_ref(Term::boolean(upper == "TRUE"));
            }
            if (const Builtin* b = find_builtin(upper)) {
                Token name = next();
                expect(TK::LParen, "'(' after " + name.text);
                std::vector<Expression> args;
                if (peek().kind != TK::RParen) {
                    args.push_back(parse_expr());
                    while (peek().kind == TK::Comma) {
                        next();
                        args.push_back(parse_expr());
                    }
                }
                expect(TK::RParen, "')'");
                if (args.size() != b->arity)
                    fail(name, std::string(b->name) + " takes " + std::to_string(b->arity) +
                                   " argument(s)");
                if (upper == "BOUND" && args[0].kind != Expression::Kind::VarRef)
                    fail(name, "BOUND takes a variable");
                return Expression::call(canonical_fn(upper), std::move(args));
            }
            check_not_reserved(t);
            fail(t, "unknown function or keyword '" + t.text + "'");
        }
        case TK::Iri:
        case TK::PName:
        case TK::Integer:
        case TK::Decimal:
        case TK::Literal:
            return Expression::term_ref(parse_data_term());
        default:
            fail(t, "expected an expression");
        }
    }

    // ---- solution modifiers ---------------------------------------------

    void parse_modifiers() {
        if (peek_kw("GROUP") || peek_kw("HAVING")) check_not_reserved(peek());
        if (accept_kw("ORDER")) {
            expect_kw("BY");
            bool any = false;
            while (true) {
                if (peek().kind == TK::Var) {
                    ast_.order_by.emplace_back(next().text, true);
                    any = true;
                } else if (peek_kw("ASC") || peek_kw("DESC")) {
                    bool asc = util::to_upper(peek().text) == "ASC";
                    next();
                    expect(TK::LParen, "'('");
                    if (peek().kind != TK::Var) fail(peek(), "expected variable in ORDER BY");
                    ast_.order_by.emplace_back(next().text, asc);
                    expect(TK::RParen, "')'");
                    any = true;
                } else {
                    break;
                }
            }
            if (!any) fail(peek(), "expected ORDER BY conditions");
        }
        bool saw_limit = false, saw_offset = false;
        while (peek_kw("LIMIT") || peek_kw("OFFSET")) {
            bool is_limit = util::to_upper(peek().text) == "LIMIT";
            next();
            if (peek().kind != TK::Integer) fail(peek(), "expected a non-negative integer");
            const Token& num = next();
            uint64_t v = 0;
            try {
                v = std::stoull(num.text);
            } catch (const std::exception&) {
                fail(num, "integer out of range");
            }
            if (is_limit) {
                if (saw_limit) fail(peek(), "duplicate LIMIT");
                saw_limit = true;
                ast_.limit = v;
            } else {
                if (saw_offset) fail(peek(), "duplicate OFFSET");
                saw_offset = true;
                ast_.offset = v;
            }
        }
    }

    void attach_projection_warnings() {
        if (ast_.kind != QueryAst::Kind::Select || ast_.select_star) return;
        auto scoped = in_scope_vars(ast_.where);
        for (const auto& v : ast_.projection) {
            if (std::find(scoped.begin(), scoped.end(), v) == scoped.end())
                ast_.warnings.push_back("projected variable ?" + v +
                                        " is not bound anywhere in the query");
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::map<std::string, std::string> prefixes_;
    QueryAst ast_;
};

inline QueryAst parse_query(const std::string& text) { return QueryParser::parse(text); }

} // namespace fedql::sparql
