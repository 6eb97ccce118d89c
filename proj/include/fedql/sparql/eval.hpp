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
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fedql/rdf/graph.hpp"
#include "fedql/sparql/ast.hpp"

namespace fedql::sparql {

using rdf::Graph;
using rdf::Triple;

/// The seam where federation plugs in: evaluates a SERVICE body against a
/// remote endpoint, joined with the incoming solutions. Must not mutate its
/// inputs; may be called several times per query.
using ServiceExecutor = std::function<SolutionSequence(
    const std::string& endpoint, const GroupPattern& body, const SolutionSequence& incoming)>;

/// Executor for leaf endpoints, where SERVICE dispatch is never legal.
inline ServiceExecutor failing_service_executor() {
    return [](const std::string& endpoint, const GroupPattern&,
              const SolutionSequence&) -> SolutionSequence {
        throw RemoteError(endpoint, "SERVICE dispatch is not available on this endpoint");
    };
}

/// Two bindings merge iff they agree on every shared variable.
inline std::optional<Binding> merge_bindings(const Binding& a, const Binding& b) {
    Binding out = a;
    for (const auto& [var, term] : b) {
        auto it = out.find(var);
        if (it == out.end()) {
            out.emplace(var, term);
        } else if (!(it->second == term)) {
            return std::nullopt;
        }
    }
    return out;
}

// ---- evaluation-time values ------------------------------------------------

/// A FILTER-time value: a term, a number (exact integers, binary doubles),
/// a boolean, or the absorbing type-error marker.
struct Value {
    enum class Kind { Error, Boolean, Integer, Double, TermV };

    Kind kind = Kind::Error;
    bool boolean = false;
    boost::multiprecision::cpp_int integer;
    double dbl = 0.0;
    std::optional<Term> origin; // the term this value came from, when any

    static Value error() { return {}; }
    static Value of_bool(bool b) {
        Value v;
        v.kind = Kind::Boolean;
        v.boolean = b;
        return v;
    }
};

namespace detail {

inline bool is_integer_datatype(const std::string& dt) { return dt == rdf::vocab::xsd_integer; }

inline bool is_float_datatype(const std::string& dt) {
    return dt == rdf::vocab::xsd_decimal || dt == rdf::vocab::xsd_double ||
           dt == rdf::vocab::xsd_float;
}

inline bool is_numeric_datatype(const std::string& dt) {
    return is_integer_datatype(dt) || is_float_datatype(dt);
}

inline bool is_string_literal(const Term& t) {
    return t.is_literal() && !t.has_lang() && t.datatype() == rdf::vocab::xsd_string;
}

inline std::optional<boost::multiprecision::cpp_int> parse_integer(const std::string& lex) {
    std::string s = lex;
    size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    for (size_t k = i; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return std::nullopt;
    return boost::multiprecision::cpp_int(s);
}

inline std::optional<double> parse_double(const std::string& lex) {
    if (lex.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(lex.c_str(), &end);
    if (end != lex.c_str() + lex.size()) return std::nullopt;
    return v;
}

/// Lifts a term into the evaluation domain, decoding numeric and boolean
/// literals by their datatype.
inline Value classify(const Term& t) {
    Value v;
    v.origin = t;
    if (t.is_literal()) {
        const auto& dt = t.datatype();
        if (is_integer_datatype(dt)) {
            auto n = parse_integer(t.value());
            if (!n) return Value::error();
            v.kind = Value::Kind::Integer;
            v.integer = std::move(*n);
            return v;
        }
        if (is_float_datatype(dt)) {
            auto n = parse_double(t.value());
            if (!n) return Value::error();
            v.kind = Value::Kind::Double;
            v.dbl = *n;
            return v;
        }
        if (dt == rdf::vocab::xsd_boolean) {
            if (t.value() == "true" || t.value() == "1") {
                v.kind = Value::Kind::Boolean;
                v.boolean = true;
                return v;
            }
            if (t.value() == "false" || t.value() == "0") {
                v.kind = Value::Kind::Boolean;
                v.boolean = false;
                return v;
            }
            return Value::error();
        }
    }
    v.kind = Value::Kind::TermV;
    return v;
}

inline bool is_numeric(const Value& v) {
    return v.kind == Value::Kind::Integer || v.kind == Value::Kind::Double;
}

inline double as_double(const Value& v) {
    return v.kind == Value::Kind::Integer ? v.integer.convert_to<double>() : v.dbl;
}

/// Effective boolean value; nullopt is the type error.
inline std::optional<bool> ebv(const Value& v) {
    switch (v.kind) {
    case Value::Kind::Boolean: return v.boolean;
    case Value::Kind::Integer: return v.integer != 0;
    case Value::Kind::Double: return v.dbl != 0.0;
    case Value::Kind::TermV:
        if (v.origin && v.origin->is_literal() &&
            (v.origin->datatype() == rdf::vocab::xsd_string || v.origin->has_lang()))
            return !v.origin->value().empty();
        return std::nullopt;
    case Value::Kind::Error: return std::nullopt;
    }
    return std::nullopt;
}

inline Value compare_values(const std::string& op, const Value& a, const Value& b) {
    auto from_cmp = [&](int cmp) -> Value {
        if (op == "=") return Value::of_bool(cmp == 0);
        if (op == "!=") return Value::of_bool(cmp != 0);
        if (op == "<") return Value::of_bool(cmp < 0);
        if (op == "<=") return Value::of_bool(cmp <= 0);
        if (op == ">") return Value::of_bool(cmp > 0);
        return Value::of_bool(cmp >= 0);
    };
    auto equality_only = [&](bool equal) -> Value {
        if (op == "=") return Value::of_bool(equal);
        if (op == "!=") return Value::of_bool(!equal);
        return Value::error();
    };

    if (a.kind == Value::Kind::Error || b.kind == Value::Kind::Error) return Value::error();

    if (is_numeric(a) && is_numeric(b)) {
        if (a.kind == Value::Kind::Integer && b.kind == Value::Kind::Integer) {
            int cmp = a.integer == b.integer ? 0 : (a.integer < b.integer ? -1 : 1);
            return from_cmp(cmp);
        }
        double x = as_double(a), y = as_double(b);
        if (std::isnan(x) || std::isnan(y)) return op == "!=" ? Value::of_bool(true) : Value::error();
        return from_cmp(x == y ? 0 : (x < y ? -1 : 1));
    }
    if (a.kind == Value::Kind::Boolean && b.kind == Value::Kind::Boolean)
        return equality_only(a.boolean == b.boolean);
    if (a.kind == Value::Kind::TermV && b.kind == Value::Kind::TermV) {
        const Term& ta = *a.origin;
        const Term& tb = *b.origin;
        if (is_string_literal(ta) && is_string_literal(tb))
            return from_cmp(ta.value().compare(tb.value()));
        if (ta.is_iri() && tb.is_iri()) return equality_only(ta == tb);
        if (ta.is_blank() && tb.is_blank()) return equality_only(ta == tb);
        if (ta.is_literal() && tb.is_literal() && ta.has_lang() && tb.has_lang())
            return equality_only(ta == tb);
        return Value::error();
    }
    return Value::error();
}

inline Value arith_values(const std::string& op, const Value& a, const Value& b) {
    if (!is_numeric(a) || !is_numeric(b)) return Value::error();
    if (op == "/") {
        if (b.kind == Value::Kind::Integer && b.integer == 0) return Value::error();
        Value v;
        v.kind = Value::Kind::Double;
        v.dbl = as_double(a) / as_double(b);
        return v;
    }
    if (a.kind == Value::Kind::Integer && b.kind == Value::Kind::Integer) {
        Value v;
        v.kind = Value::Kind::Integer;
        if (op == "+") v.integer = a.integer + b.integer;
        else if (op == "-") v.integer = a.integer - b.integer;
        else v.integer = a.integer * b.integer;
        return v;
    }
    Value v;
    v.kind = Value::Kind::Double;
    double x = as_double(a), y = as_double(b);
    if (op == "+") v.dbl = x + y;
    else if (op == "-") v.dbl = x - y;
    else v.dbl = x * y;
    return v;
}

inline const Term* string_literal_of(const Value& v) {
    if (v.kind == Value::Kind::TermV && v.origin && is_string_literal(*v.origin))
        return &*v.origin;
    return nullptr;
}

} // namespace detail

/// FILTER expression evaluation. Never throws: every type mishap is the
/// absorbing TypeError value, which excludes the row.
inline Value eval_expression(const Expression& e, const Binding& row) {
    using K = Expression::Kind;
    switch (e.kind) {
    case K::TermRef:
        return detail::classify(*e.term);
    case K::VarRef: {
        auto it = row.find(e.var);
        if (it == row.end()) return Value::error();
        return detail::classify(it->second);
    }
    case K::Not: {
        auto b = detail::ebv(eval_expression(e.args[0], row));
        if (!b) return Value::error();
        return Value::of_bool(!*b);
    }
    case K::Or:
    case K::And: {
        auto a = detail::ebv(eval_expression(e.args[0], row));
        auto b = detail::ebv(eval_expression(e.args[1], row));
        if (!a || !b) return Value::error();
        return Value::of_bool(e.kind == K::Or ? (*a || *b) : (*a && *b));
    }
    case K::Compare:
        return detail::compare_values(e.op, eval_expression(e.args[0], row),
                                      eval_expression(e.args[1], row));
    case K::Arith:
        return detail::arith_values(e.op, eval_expression(e.args[0], row),
                                    eval_expression(e.args[1], row));
    case K::Call: {
        const std::string& fn = e.op;
        if (fn == "BOUND") return Value::of_bool(row.count(e.args[0].var) > 0);
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval_expression(a, row));
        for (const auto& a : args)
            if (a.kind == Value::Kind::Error) return Value::error();

        if (fn == "STR") {
            if (!args[0].origin) return Value::error();
            const Term& t = *args[0].origin;
            if (t.is_iri() || t.is_literal()) {
                Value v;
                v.kind = Value::Kind::TermV;
                v.origin = Term::literal(t.value());
                return v;
            }
            return Value::error();
        }
        if (fn == "LANG") {
            if (!args[0].origin || !args[0].origin->is_literal()) return Value::error();
            Value v;
            v.kind = Value::Kind::TermV;
            v.origin = Term::literal(args[0].origin->lang());
            return v;
        }
        if (fn == "DATATYPE") {
            if (!args[0].origin || !args[0].origin->is_literal()) return Value::error();
            Value v;
            v.kind = Value::Kind::TermV;
            v.origin = Term::iri(args[0].origin->datatype());
            return v;
        }
        if (fn == "isIRI")
            return args[0].origin ? Value::of_bool(args[0].origin->is_iri()) : Value::error();
        if (fn == "isLiteral")
            return args[0].origin ? Value::of_bool(args[0].origin->is_literal()) : Value::error();
        if (fn == "CONTAINS" || fn == "STRSTARTS") {
            const Term* s = detail::string_literal_of(args[0]);
            const Term* sub = detail::string_literal_of(args[1]);
            if (!s || !sub) return Value::error();
            if (fn == "CONTAINS")
                return Value::of_bool(s->value().find(sub->value()) != std::string::npos);
            return Value::of_bool(util::starts_with(s->value(), sub->value()));
        }
        if (fn == "REGEX") {
            const Term* s = detail::string_literal_of(args[0]);
            const Term* pat = detail::string_literal_of(args[1]);
            if (!s || !pat) return Value::error();
            try {
                std::regex re(pat->value(), std::regex::ECMAScript);
                return Value::of_bool(std::regex_search(s->value(), re));
            } catch (const std::regex_error&) {
                return Value::error();
            }
        }
        return Value::error();
    }
    }
    return Value::error();
}

// ---- term ordering (ORDER BY) -----------------------------------------------

namespace detail {

/// Total order over optional terms: unbound < blank < IRI < literal.
/// Within literals, the numeric class sorts first by value; everything else
/// compares by (lexical, datatype, language).
inline int order_compare_terms(const Term* a, const Term* b) {
    if (!a && !b) return 0;
    if (!a) return -1;
    if (!b) return 1;
    auto rank = [](const Term& t) {
        switch (t.kind()) {
        case rdf::TermKind::BlankNode: return 0;
        case rdf::TermKind::Iri: return 1;
        case rdf::TermKind::Literal: return 2;
        }
        return 3;
    };
    if (rank(*a) != rank(*b)) return rank(*a) < rank(*b) ? -1 : 1;
    if (!a->is_literal()) return a->value().compare(b->value()) < 0   ? -1
                                 : a->value().compare(b->value()) > 0 ? 1
                                                                      : 0;
    bool na = is_numeric_datatype(a->datatype()), nb = is_numeric_datatype(b->datatype());
    if (na != nb) return na ? -1 : 1;
    if (na) {
        Value va = classify(*a), vb = classify(*b);
        if (is_numeric(va) && is_numeric(vb)) {
            double x = as_double(va), y = as_double(vb);
            if (x < y) return -1;
            if (x > y) return 1;
        }
    }
    auto ka = std::tie(a->value(), a->datatype(), a->lang());
    auto kb = std::tie(b->value(), b->datatype(), b->lang());
    return ka < kb ? -1 : (kb < ka ? 1 : 0);
}

} // namespace detail

// ---- basic graph patterns ----------------------------------------------------

namespace detail {

inline std::optional<Binding> unify(const TriplePattern& p, const Triple& t, const Binding& row) {
    Binding out = row;
    auto bind = [&](const PatternTerm& pt, const Term& value) {
        if (is_var(pt)) {
            auto [it, added] = out.emplace(as_var(pt).name, value);
            return added || it->second == value;
        }
        return as_term(pt) == value;
    };
    if (!bind(p.subject, t.subject)) return std::nullopt;
    if (!bind(p.predicate, t.predicate)) return std::nullopt;
    if (!bind(p.object, t.object)) return std::nullopt;
    return out;
}

inline rdf::TermPattern resolve(const PatternTerm& pt, const Binding& row) {
    if (!is_var(pt)) return as_term(pt);
    auto it = row.find(as_var(pt).name);
    if (it != row.end()) return it->second;
    return std::nullopt;
}

inline void add_pattern_vars(const TriplePattern& p, std::vector<std::string>& vars,
                             std::set<std::string>& seen) {
    for (const PatternTerm* pt : {&p.subject, &p.predicate, &p.object})
        if (is_var(*pt) && seen.insert(as_var(*pt).name).second) vars.push_back(as_var(*pt).name);
}

} // namespace detail

/// Joins the seed solutions with all matches of the pattern conjunction.
/// Patterns are evaluated most-bound-first: at each step the pattern with the
/// most positions that are constants or already-bound variables runs next
/// (ties keep the written order). The result multiset does not depend on the
/// chosen order.
inline SolutionSequence eval_bgp(const Graph& graph, const std::vector<TriplePattern>& patterns,
                                 const SolutionSequence& seed) {
    // decide the join order once, from the statically known bound variables
    std::set<std::string> bound(seed.vars.begin(), seed.vars.end());
    std::vector<size_t> order;
    std::vector<bool> used(patterns.size(), false);
    for (size_t step = 0; step < patterns.size(); ++step) {
        size_t best = patterns.size();
        int best_score = -1;
        for (size_t i = 0; i < patterns.size(); ++i) {
            if (used[i]) continue;
            int score = 0;
            for (const PatternTerm* pt :
                 {&patterns[i].subject, &patterns[i].predicate, &patterns[i].object})
                if (!is_var(*pt) || bound.count(as_var(*pt).name)) ++score;
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        used[best] = true;
        order.push_back(best);
        for (const PatternTerm* pt :
             {&patterns[best].subject, &patterns[best].predicate, &patterns[best].object})
            if (is_var(*pt)) bound.insert(as_var(*pt).name);
    }

    SolutionSequence out;
    out.vars = seed.vars;
    {
        std::set<std::string> seen(seed.vars.begin(), seed.vars.end());
        for (const auto& p : patterns) detail::add_pattern_vars(p, out.vars, seen);
    }

    std::vector<Binding> rows = seed.rows;
    for (size_t idx : order) {
        const TriplePattern& p = patterns[idx];
        std::vector<Binding> next;
        for (const auto& row : rows) {
            auto matches = graph.match(detail::resolve(p.subject, row),
                                       detail::resolve(p.predicate, row),
                                       detail::resolve(p.object, row));
            for (const auto& t : matches) {
                if (auto merged = detail::unify(p, t, row)) next.push_back(std::move(*merged));
            }
        }
        rows = std::move(next);
    }
    out.rows = std::move(rows);
    return out;
}

// ---- group patterns ----------------------------------------------------------

/// Left-to-right threading of the solution sequence through the group's
/// elements. SERVICE is delegated to the executor; a SILENT service whose
/// executor fails contributes the identity join (incoming passes unchanged).
inline SolutionSequence eval_group(const Graph& graph, const GroupPattern& group,
                                   const SolutionSequence& seed, const ServiceExecutor& svc) {
    SolutionSequence cur = seed;
    for (const auto& el : group.elements) {
        using K = GroupPattern::Element::Kind;
        switch (el.kind) {
        case K::Triples:
            cur = eval_bgp(graph, el.triples, cur);
            break;
        case K::Filter: {
            std::vector<Binding> kept;
            for (auto& row : cur.rows) {
                auto b = detail::ebv(eval_expression(el.filter, row));
                if (b && *b) kept.push_back(std::move(row));
            }
            cur.rows = std::move(kept);
            break;
        }
        case K::Optional: {
            const GroupPattern& body = el.body.front();
            SolutionSequence out;
            out.vars = cur.vars;
            {
                std::set<std::string> seen(cur.vars.begin(), cur.vars.end());
                for (const auto& v : in_scope_vars(body))
                    if (seen.insert(v).second) out.vars.push_back(v);
            }
            for (const auto& row : cur.rows) {
                SolutionSequence one;
                one.vars = cur.vars;
                one.rows.push_back(row);
                SolutionSequence ext = eval_group(graph, body, one, svc);
                if (ext.rows.empty()) {
                    out.rows.push_back(row);
                } else {
                    for (auto& r : ext.rows) out.rows.push_back(std::move(r));
                }
            }
            cur = std::move(out);
            break;
        }
        case K::Values: {
            SolutionSequence out;
            out.vars = cur.vars;
            {
                std::set<std::string> seen(cur.vars.begin(), cur.vars.end());
                for (const auto& v : el.values_vars)
                    if (seen.insert(v).second) out.vars.push_back(v);
            }
            for (const auto& row : cur.rows) {
                for (const auto& vrow : el.values_rows) {
                    Binding vb;
                    for (size_t i = 0; i < el.values_vars.size(); ++i)
                        if (vrow[i]) vb.emplace(el.values_vars[i], *vrow[i]);
                    if (auto merged = merge_bindings(row, vb)) out.rows.push_back(std::move(*merged));
                }
            }
            cur = std::move(out);
            break;
        }
        case K::Service: {
            const GroupPattern& body = el.body.front();
            if (el.service_silent) {
                try {
                    cur = svc(el.service_endpoint, body, cur);
                } catch (const RemoteError&) {
                    // SILENT: the failed service contributes the identity join
                }
            } else {
                cur = svc(el.service_endpoint, body, cur);
            }
            break;
        }
        }
    }
    return cur;
}

// ---- queries -----------------------------------------------------------------

namespace detail {

inline SolutionSequence unit_seed() {
    SolutionSequence s;
    s.rows.emplace_back();
    return s;
}

} // namespace detail

/// SELECT/ASK evaluation: group evaluation from the unit seed, then
/// projection, DISTINCT, ORDER BY (stable, total term order) and
/// LIMIT/OFFSET, in that order. ASK encodes its answer as a zero- or
/// one-row sequence with no variables.
inline SolutionSequence eval_select(const Graph& graph, const QueryAst& ast,
                                    const ServiceExecutor& svc) {
    SolutionSequence cur = eval_group(graph, ast.where, detail::unit_seed(), svc);

    if (ast.kind == QueryAst::Kind::Ask) {
        SolutionSequence out;
        if (!cur.rows.empty()) out.rows.emplace_back();
        return out;
    }

    SolutionSequence out;
    out.vars = ast.select_star ? cur.vars : ast.projection;
    out.rows.reserve(cur.rows.size());
    for (const auto& row : cur.rows) {
        Binding projected;
        for (const auto& v : out.vars) {
            auto it = row.find(v);
            if (it != row.end()) projected.emplace(it->first, it->second);
        }
        out.rows.push_back(std::move(projected));
    }

    if (ast.distinct) {
        std::set<Binding> seen;
        std::vector<Binding> dedup;
        for (auto& row : out.rows)
            if (seen.insert(row).second) dedup.push_back(std::move(row));
        out.rows = std::move(dedup);
    }

    if (!ast.order_by.empty()) {
        auto key_term = [](const Binding& row, const std::string& var) -> const Term* {
            auto it = row.find(var);
            return it == row.end() ? nullptr : &it->second;
        };
        std::stable_sort(out.rows.begin(), out.rows.end(),
                         [&](const Binding& a, const Binding& b) {
                             for (const auto& [var, asc] : ast.order_by) {
                                 int cmp = detail::order_compare_terms(key_term(a, var),
                                                                       key_term(b, var));
                                 if (cmp != 0) return asc ? cmp < 0 : cmp > 0;
                             }
                             return false;
                         });
    }

    size_t begin = ast.offset ? std::min<size_t>(*ast.offset, out.rows.size()) : 0;
    size_t end = out.rows.size();
    if (ast.limit) end = std::min(end, begin + *ast.limit);
    out.rows = std::vector<Binding>(out.rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                    out.rows.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

/// CONSTRUCT evaluation: instantiate the template once per solution row.
/// Instantiations with an unbound variable, a literal subject or a non-IRI
/// predicate are skipped; template blank nodes are renamed fresh per row.
inline Graph eval_construct(const Graph& graph, const QueryAst& ast, const ServiceExecutor& svc) {
    SolutionSequence sols = eval_group(graph, ast.where, detail::unit_seed(), svc);
    Graph out;
    size_t blank_counter = 0;
    for (const auto& row : sols.rows) {
        std::map<std::string, std::string> row_blanks;
        auto instantiate = [&](const PatternTerm& pt) -> std::optional<Term> {
            if (is_var(pt)) {
                auto it = row.find(as_var(pt).name);
                if (it == row.end()) return std::nullopt;
                return it->second;
            }
            const Term& t = as_term(pt);
            if (t.is_blank()) {
                auto [it, added] = row_blanks.emplace(t.value(), "");
                if (added) it->second = "c" + std::to_string(blank_counter++);
                return Term::blank(it->second);
            }
            return t;
        };
        for (const auto& tmpl : ast.construct_template) {
            auto s = instantiate(tmpl.subject);
            auto p = instantiate(tmpl.predicate);
            auto o = instantiate(tmpl.object);
            if (!s || !p || !o) continue;
            if (s->is_literal() || !p->is_iri()) continue;
            out.insert({std::move(*s), std::move(*p), std::move(*o)});
        }
    }
    return out;
}

} // namespace fedql::sparql
