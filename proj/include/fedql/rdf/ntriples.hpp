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

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "fedql/rdf/graph.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::rdf {

namespace detail {

/// Line-scoped cursor over one N-Triples statement.
class NtCursor {
public:
    NtCursor(const std::string& line, int lineno) : line_(line), lineno_(lineno) {}

    void skip_ws() {
        while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }

    char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

    [[noreturn]] void fail(const std::string& msg) const { throw NTriplesError(lineno_, msg); }

    Term parse_term() {
        skip_ws();
        if (pos_ >= line_.size()) fail("unexpected end of statement");
        char c = line_[pos_];
        if (c == '<') return parse_iri();
        if (c == '_') return parse_blank();
        if (c == '"') return parse_literal();
        fail(std::string("unexpected character '") + c + "'");
    }

    Term parse_iri() {
        ++pos_; // '<'
        std::string value;
        while (pos_ < line_.size() && line_[pos_] != '>') {
            char c = line_[pos_];
            if (c == '<' || c == '"' || c == ' ' || c == '\t' ||
                static_cast<unsigned char>(c) < 0x20)
                fail("illegal character in IRI");
            value.push_back(c);
            ++pos_;
        }
        if (pos_ >= line_.size()) fail("unterminated IRI");
        ++pos_; // '>'
        if (value.empty()) fail("empty IRI");
        return Term::iri(value);
    }

    Term parse_blank() {
        if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != ':') fail("expected '_:'");
        pos_ += 2;
        std::string label;
        while (pos_ < line_.size() && std::isalnum(static_cast<unsigned char>(line_[pos_]))) {
            label.push_back(line_[pos_]);
            ++pos_;
        }
        if (label.empty()) fail("empty blank node label");
        return Term::blank(label);
    }

    Term parse_literal() {
        ++pos_; // '"'
        std::string lexical;
        while (true) {
            if (pos_ >= line_.size()) fail("unterminated literal");
            char c = line_[pos_];
            if (c == '"') {
                ++pos_;
                break;
            }
            if (c == '\\') {
                lexical += parse_escape();
            } else {
                lexical.push_back(c);
                ++pos_;
            }
        }
        if (peek() == '@') {
            ++pos_;
            std::string tag;
            while (pos_ < line_.size() &&
                   (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '-')) {
                tag.push_back(line_[pos_]);
                ++pos_;
            }
            if (tag.empty()) fail("empty language tag");
            try {
                return Term::lang_literal(lexical, tag);
            } catch (const Error& e) {
                fail(e.what());
            }
        }
        if (peek() == '^') {
            if (pos_ + 1 >= line_.size() || line_[pos_ + 1] != '^') fail("expected '^^'");
            pos_ += 2;
            skip_ws();
            if (peek() != '<') fail("expected datatype IRI");
            Term dt = parse_iri();
            if (dt.value() == vocab::rdf_lang_string) fail("langString literal needs '@tag' form");
            return Term::literal(lexical, dt.value());
        }
        return Term::literal(lexical);
    }

    void expect_dot() {
        skip_ws();
        if (peek() != '.') fail("expected '.' terminator");
        ++pos_;
        skip_ws();
        // trailing comment after the terminator is allowed
        if (pos_ < line_.size() && line_[pos_] != '#') fail("trailing content after '.'");
    }

private:
    std::string parse_escape() {
        ++pos_; // backslash
        if (pos_ >= line_.size()) fail("dangling escape");
        char c = line_[pos_++];
        switch (c) {
        case 't': return "\t";
        case 'n': return "\n";
        case 'r': return "\r";
        case '"': return "\"";
        case '\\': return "\\";
        case 'u': return parse_unicode(4);
        case 'U': return parse_unicode(8);
        default: fail(std::string("unknown escape '\\") + c + "'");
        }
    }

    std::string parse_unicode(int digits) {
        uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (pos_ >= line_.size()) fail("truncated \\u escape");
            int v = util::hex_value(line_[pos_++]);
            if (v < 0) fail("bad hex digit in \\u escape");
            cp = (cp << 4) | static_cast<uint32_t>(v);
        }
        if (cp > 0x10FFFF) fail("code point out of range");
        std::string out;
        util::append_utf8(out, cp);
        return out;
    }

    const std::string& line_;
    int lineno_;
    size_t pos_ = 0;
};

} // namespace detail

/// Parses a line-oriented N-Triples document. Blank lines and '#' comment
/// lines are skipped; blank node labels are shared within the document.
/// Any malformed statement aborts the whole parse.
inline Graph parse_ntriples(const std::string& text) {
    Graph g;
    int lineno = 0;
    size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        std::string line = text.substr(start, nl == std::string::npos ? std::string::npos
                                                                      : nl - start);
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        detail::NtCursor cur(line, lineno);
        if (cur.at_end() || cur.peek() == '#') continue;

        Term s = cur.parse_term();
        if (s.is_literal()) cur.fail("literal subject");
        Term p = cur.parse_term();
        if (!p.is_iri()) cur.fail("predicate must be an IRI");
        Term o = cur.parse_term();
        cur.expect_dot();
        g.insert({std::move(s), std::move(p), std::move(o)});
    }
    return g;
}

/// Deterministic serialization: statements sorted by the lexical forms of
/// (subject, predicate, object), blank nodes renumbered _:b0, _:b1, ... in
/// first-appearance order over the sorted stream.
inline std::string serialize_ntriples(const Graph& g) {
    struct Line {
        std::string s, p, o;
        const Triple* t;
    };
    auto triples = g.triples();
    std::vector<Line> lines;
    lines.reserve(triples.size());
    for (const auto& t : triples)
        lines.push_back({to_ntriples(t.subject), to_ntriples(t.predicate), to_ntriples(t.object), &t});
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        return std::tie(a.s, a.p, a.o) < std::tie(b.s, b.p, b.o);
    });

    std::map<std::string, std::string> blank_names;
    auto blank_name = [&](const Term& t) {
        auto it = blank_names.find(t.value());
        if (it == blank_names.end())
            it = blank_names.emplace(t.value(), "_:b" + std::to_string(blank_names.size())).first;
        return it->second;
    };
    auto render = [&](const Term& t) { return t.is_blank() ? blank_name(t) : to_ntriples(t); };

    std::string out;
    for (const auto& l : lines) {
        out += render(l.t->subject);
        out += " ";
        out += l.p;
        out += " ";
        out += render(l.t->object);
        out += " .\n";
    }
    return out;
}

} // namespace fedql::rdf
