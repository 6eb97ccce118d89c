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

#include "json.hpp"

#include "fedql/errors.hpp"
#include "fedql/sparql/ast.hpp"

namespace fedql::sparql {

namespace detail {

inline nlohmann::json term_to_json(const Term& t) {
    nlohmann::json obj;
    switch (t.kind()) {
    case rdf::TermKind::Iri:
        obj["type"] = "uri";
        obj["value"] = t.value();
        break;
    case rdf::TermKind::BlankNode:
        obj["type"] = "bnode";
        obj["value"] = t.value();
        break;
    case rdf::TermKind::Literal:
        obj["type"] = "literal";
        obj["value"] = t.value();
        if (t.has_lang()) {
            obj["xml:lang"] = t.lang();
        } else if (t.datatype() != rdf::vocab::xsd_string) {
            obj["datatype"] = t.datatype();
        }
        break;
    }
    return obj;
}

inline Term term_from_json(const nlohmann::json& obj) {
    if (!obj.is_object() || !obj.contains("type") || !obj.contains("value") ||
        !obj["type"].is_string() || !obj["value"].is_string())
        throw MalformedResults("binding term must be an object with string type and value");
    const std::string type = obj["type"].get<std::string>();
    const std::string value = obj["value"].get<std::string>();
    try {
        if (type == "uri") return Term::iri(value);
        if (type == "bnode") return Term::blank(value);
        if (type == "literal" || type == "typed-literal") {
            if (obj.contains("xml:lang") && obj["xml:lang"].is_string())
                return Term::lang_literal(value, obj["xml:lang"].get<std::string>());
            if (obj.contains("datatype") && obj["datatype"].is_string())
                return Term::literal(value, obj["datatype"].get<std::string>());
            return Term::literal(value);
        }
    } catch (const MalformedResults&) {
        throw;
    } catch (const Error& e) {
        throw MalformedResults(e.what());
    }
    throw MalformedResults("unknown term type '" + type + "'");
}

} // namespace detail

/// Standard SPARQL results JSON: {"head":{"vars":[...]},"results":{"bindings":[...]}}.
/// Unbound variables are omitted from their row object; row order is preserved.
inline std::string serialize_select_results(const SolutionSequence& s) {
    nlohmann::json doc;
    doc["head"]["vars"] = s.vars;
    auto& bindings = doc["results"]["bindings"] = nlohmann::json::array();
    for (const auto& row : s.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (const auto& [var, term] : row) obj[var] = detail::term_to_json(term);
        bindings.push_back(std::move(obj));
    }
    return doc.dump();
}

/// Inverse of serialize_select_results. Unknown extra keys are ignored;
/// a missing head/results section or a bad term object is an error.
inline SolutionSequence parse_select_results(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResults(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("head") || !doc["head"].is_object())
        throw MalformedResults("missing head");
    if (!doc["head"].contains("vars") || !doc["head"]["vars"].is_array())
        throw MalformedResults("missing head.vars");
    if (!doc.contains("results") || !doc["results"].is_object() ||
        !doc["results"].contains("bindings") || !doc["results"]["bindings"].is_array())
        throw MalformedResults("missing results.bindings");

    SolutionSequence out;
    for (const auto& v : doc["head"]["vars"]) {
        if (!v.is_string()) throw MalformedResults("head.vars entries must be strings");
        out.vars.push_back(v.get<std::string>());
    }
    for (const auto& row : doc["results"]["bindings"]) {
        if (!row.is_object()) throw MalformedResults("bindings entries must be objects");
        Binding b;
        for (auto it = row.begin(); it != row.end(); ++it) {
            if (std::find(out.vars.begin(), out.vars.end(), it.key()) == out.vars.end())
                throw MalformedResults("binding for undeclared variable '" + it.key() + "'");
            b.emplace(it.key(), detail::term_from_json(it.value()));
        }
        out.rows.push_back(std::move(b));
    }
    return out;
}

} // namespace fedql::sparql
