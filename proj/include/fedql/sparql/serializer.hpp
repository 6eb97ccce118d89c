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

#include <string>

#include "fedql/sparql/ast.hpp"

namespace fedql::sparql {

namespace detail {

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

inline bool plain_decimal(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) return false;
    return all_digits(s.substr(0, dot)) && all_digits(s.substr(dot + 1));
}

/// Term in query syntax. Numbers and booleans use the bare token form when
/// the lexical form re-lexes to the same datatype; anything else falls back
/// to the explicitly typed N-Triples shape.
inline std::string query_term(const Term& t) {
    if (t.is_literal() && !t.has_lang()) {
        const auto& dt = t.datatype();
        const auto& lex = t.value();
        if (dt == rdf::vocab::xsd_integer && all_digits(lex)) return lex;
        if (dt == rdf::vocab::xsd_decimal && plain_decimal(lex)) return lex;
        if (dt == rdf::vocab::xsd_boolean && (lex == "true" || lex == "false")) return lex;
    }
    return rdf::to_ntriples(t);
}

inline std::string pattern_term(const PatternTerm& p) {
    if (is_var(p)) return "?" + as_var(p).name;
    return query_term(as_term(p));
}

inline std::string expr_text(const Expression& e) {
    using K = Expression::Kind;
    switch (e.kind) {
    case K::TermRef: return query_term(*e.term);
    case K::VarRef: return "?" + e.var;
    case K::Not: return "(! " + expr_text(e.args[0]) + ")";
    case K::Or:
    case K::And:
    case K::Compare:
    case K::Arith:
        return "(" + expr_text(e.args[0]) + " " + e.op + " " + expr_text(e.args[1]) + ")";
    case K::Call: {
        std::string out = e.op + "(";
        for (size_t i = 0; i < e.args.size(); ++i) {
            if (i) out += ", ";
            out += expr_text(e.args[i]);
        }
        return out + ")";
    }
    }
    return {};
}

inline void triples_text(const std::vector<TriplePattern>& patterns, const std::string& indent,
                         std::string& out) {
    for (const auto& tp : patterns) {
        out += indent + pattern_term(tp.subject) + " " + pattern_term(tp.predicate) + " " +
               pattern_term(tp.object) + " .\n";
    }
}

inline void group_text(const GroupPattern& g, int depth, std::string& out) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    std::string inner(static_cast<size_t>(depth + 1) * 2, ' ');
    out += "{\n";
    for (const auto& el : g.elements) {
        using K = GroupPattern::Element::Kind;
        switch (el.kind) {
        case K::Triples:
            triples_text(el.triples, inner, out);
            break;
        case K::Filter:
            out += inner + "FILTER (" + expr_text(el.filter) + ")\n";
            break;
        case K::Optional:
            out += inner + "OPTIONAL ";
            group_text(el.body.front(), depth + 1, out);
            break;
        case K::Service:
            out += inner + "SERVICE " + (el.service_silent ? std::string("SILENT ") : "") + "<" +
                   el.service_endpoint + "> ";
            group_text(el.body.front(), depth + 1, out);
            break;
        case K::Values: {
            out += inner + "VALUES (";
            for (size_t i = 0; i < el.values_vars.size(); ++i) {
                if (i) out += " ";
                out += "?" + el.values_vars[i];
            }
            out += ") {\n";
            for (const auto& row : el.values_rows) {
                out += inner + "  (";
                for (size_t i = 0; i < row.size(); ++i) {
                    if (i) out += " ";
                    out += row[i] ? query_term(*row[i]) : "UNDEF";
                }
                out += ")\n";
            }
            out += inner + "}\n";
            break;
        }
        }
    }
    out += indent + "}\n";
}

} // namespace detail

/// Renders an AST back to query text. All terms are written in full IRI form.
/// parse_query(serialize_query(ast)) is structurally equal to ast.
inline std::string serialize_query(const QueryAst& ast) {
    std::string out;
    switch (ast.kind) {
    case QueryAst::Kind::Select: {
        out += "SELECT ";
        if (ast.distinct) out += "DISTINCT ";
        if (ast.select_star) {
            out += "*";
        } else {
            for (size_t i = 0; i < ast.projection.size(); ++i) {
                if (i) out += " ";
                out += "?" + ast.projection[i];
            }
        }
        out += " WHERE ";
        detail::group_text(ast.where, 0, out);
        break;
    }
    case QueryAst::Kind::Construct:
        out += "CONSTRUCT {\n";
        detail::triples_text(ast.construct_template, "  ", out);
        out += "} WHERE ";
        detail::group_text(ast.where, 0, out);
        break;
    case QueryAst::Kind::Ask:
        out += "ASK ";
        detail::group_text(ast.where, 0, out);
        break;
    }
    if (!ast.order_by.empty()) {
        out += "ORDER BY";
        for (const auto& [var, asc] : ast.order_by)
            out += asc ? " ?" + var : " DESC(?" + var + ")";
        out += "\n";
    }
    if (ast.limit) out += "LIMIT " + std::to_string(*ast.limit) + "\n";
    if (ast.offset) out += "OFFSET " + std::to_string(*ast.offset) + "\n";
    return out;
}

} // namespace fedql::sparql
