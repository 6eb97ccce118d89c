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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fedql/rdf/term.hpp"

namespace fedql::sparql {

using rdf::Term;

struct Variable {
    std::string name;
    bool operator==(const Variable&) const = default;
};

/// A triple pattern position: a concrete term or a variable.
using PatternTerm = std::variant<Term, Variable>;

inline bool is_var(const PatternTerm& p) { return std::holds_alternative<Variable>(p); }
inline const Variable& as_var(const PatternTerm& p) { return std::get<Variable>(p); }
inline const Term& as_term(const PatternTerm& p) { return std::get<Term>(p); }

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
    bool operator==(const TriplePattern&) const = default;
};

/// FILTER expression tree. Plain value type; children owned by value.
struct Expression {
    enum class Kind { Or, And, Not, Compare, Arith, Call, TermRef, VarRef };

    Kind kind = Kind::TermRef;
    std::string op;                 // Compare: = != < <= > >=; Arith: + - * /; Call: function name
    std::vector<Expression> args;
    std::optional<Term> term;       // TermRef
    std::string var;                // VarRef

    bool operator==(const Expression&) const = default;

    static Expression term_ref(Term t) {
        Expression e;
        e.kind = Kind::TermRef;
        e.term = std::move(t);
        return e;
    }
    static Expression var_ref(std::string name) {
        Expression e;
        e.kind = Kind::VarRef;
        e.var = std::move(name);
        return e;
    }
    static Expression unary(Kind kind, Expression a) {
        Expression e;
        e.kind = kind;
        e.args.push_back(std::move(a));
        return e;
    }
    static Expression binary(Kind kind, std::string op, Expression a, Expression b) {
        Expression e;
        e.kind = kind;
        e.op = std::move(op);
        e.args.push_back(std::move(a));
        e.args.push_back(std::move(b));
        return e;
    }
    static Expression call(std::string fn, std::vector<Expression> args) {
        Expression e;
        e.kind = Kind::Call;
        e.op = std::move(fn);
        e.args = std::move(args);
        return e;
    }
};

/// Group graph pattern: an ordered list of elements evaluated left to right.
struct GroupPattern {
    struct Element {
        enum class Kind { Triples, Filter, Optional, Service, Values };

        Kind kind = Kind::Triples;
        std::vector<TriplePattern> triples;                      // Triples
        Expression filter;                                       // Filter
        std::vector<GroupPattern> body;                          // Optional/Service: exactly one entry
        std::string service_endpoint;                            // Service
        bool service_silent = false;                             // Service
        std::vector<std::string> values_vars;                    // Values
        std::vector<std::vector<std::optional<Term>>> values_rows; // Values; nullopt = UNDEF

        bool operator==(const Element&) const = default;
    };

    std::vector<Element> elements;
    bool operator==(const GroupPattern&) const = default;
};

/// Parsed query. Prefixes are already expanded: no prefixed names survive
/// anywhere in the AST.
struct QueryAst {
    enum class Kind { Select, Construct, Ask };

    Kind kind = Kind::Select;
    bool distinct = false;
    bool select_star = false;
    std::vector<std::string> projection;             // Select with explicit vars
    std::vector<TriplePattern> construct_template;   // Construct
    GroupPattern where;
    std::vector<std::pair<std::string, bool>> order_by; // (var, ascending)
    std::optional<uint64_t> limit;
    std::optional<uint64_t> offset;
    std::map<std::string, std::string> prefixes;     // as declared, informational
    std::vector<std::string> warnings;               // non-fatal parse diagnostics

    bool operator==(const QueryAst& o) const {
        // warnings/prefixes are diagnostics, not query identity
        return kind == o.kind && distinct == o.distinct && select_star == o.select_star &&
               projection == o.projection && construct_template == o.construct_template &&
               where == o.where && order_by == o.order_by && limit == o.limit &&
               offset == o.offset;
    }
};

/// Ordered multiset of solution rows. A row binds a subset of `vars`;
/// absent entries are unbound.
struct SolutionSequence {
    std::vector<std::string> vars;
    std::vector<std::map<std::string, Term>> rows;

    bool operator==(const SolutionSequence&) const = default;
};

using Binding = std::map<std::string, Term>;

/// Variables a group pattern can bind (in scope), in first-appearance order.
/// FILTER-only variables are not in scope.
inline void collect_in_scope_vars(const GroupPattern& g, std::vector<std::string>& out,
                                  std::set<std::string>& seen) {
    auto add = [&](const std::string& v) {
        if (seen.insert(v).second) out.push_back(v);
    };
    auto add_pattern = [&](const TriplePattern& tp) {
        for (const PatternTerm* p : {&tp.subject, &tp.predicate, &tp.object})
            if (is_var(*p)) add(as_var(*p).name);
    };
    for (const auto& el : g.elements) {
        switch (el.kind) {
        case GroupPattern::Element::Kind::Triples:
            for (const auto& tp : el.triples) add_pattern(tp);
            break;
        case GroupPattern::Element::Kind::Optional:
        case GroupPattern::Element::Kind::Service:
            for (const auto& child : el.body) collect_in_scope_vars(child, out, seen);
            break;
        case GroupPattern::Element::Kind::Values:
            for (const auto& v : el.values_vars) add(v);
            break;
        case GroupPattern::Element::Kind::Filter:
            break;
        }
    }
}

inline std::vector<std::string> in_scope_vars(const GroupPattern& g) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_in_scope_vars(g, out, seen);
    return out;
}

/// True if the group (recursively) contains a SERVICE element.
inline bool contains_service(const GroupPattern& g) {
    for (const auto& el : g.elements) {
        if (el.kind == GroupPattern::Element::Kind::Service) return true;
        for (const auto& child : el.body)
            if (contains_service(child)) return true;
    }
    return false;
}

} // namespace fedql::sparql
