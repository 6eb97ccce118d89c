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

#include "fedql/rdf/graph.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::lift {

using rdf::Graph;
using rdf::Term;

/// How a JSON document becomes triples: generated predicates live under
/// `base` (must end in '#' or '/'), the document root maps to `root`.
struct LiftConfig {
    std::string base;
    std::string root;

    void validate() const {
        if (base.empty() || (base.back() != '#' && base.back() != '/'))
            throw Error("lift base must end with '#' or '/': " + base);
        Term::iri(base.substr(0, base.size() - 1) + "x"); // IRI sanity
        Term::iri(root);
    }
};

namespace detail {

class Lifter {
public:
    Lifter(const LiftConfig& cfg) : cfg_(cfg) {}

    Graph run(const nlohmann::json& doc) {
        if (doc.is_object() || doc.is_array()) lift_container(Term::iri(cfg_.root), doc);
        return std::move(graph_);
    }

private:
    Term predicate(const std::string& key) const {
        return Term::iri(cfg_.base + util::pct_encode(key));
    }

    Term fresh_blank() { return Term::blank("j" + std::to_string(blank_counter_++)); }

    static Term scalar(const nlohmann::json& j) {
        if (j.is_string()) return Term::literal(j.get<std::string>());
        if (j.is_boolean()) return Term::boolean(j.get<bool>());
        // numbers keep their serialized lexical form; an integral lexical
        // form (no '.', no exponent) types as xsd:integer
        if (j.is_number_integer() || j.is_number_unsigned())
            return Term::literal(j.dump(), rdf::vocab::xsd_integer);
        return Term::literal(j.dump(), rdf::vocab::xsd_double);
    }

    void lift_container(const Term& node, const nlohmann::json& j) {
        if (j.is_object()) {
            for (const auto& [key, value] : j.items()) member(node, predicate(key), value);
        } else {
            // keyless membership (root or nested arrays) uses the reserved
            // "_item" predicate
            Term p = predicate("_item");
            for (size_t i = 0; i < j.size(); ++i) element(node, p, j[i], i);
        }
    }

    void member(const Term& node, const Term& p, const nlohmann::json& value) {
        if (value.is_null()) return;
        if (value.is_array()) {
            for (size_t i = 0; i < value.size(); ++i) element(node, p, value[i], i);
            return;
        }
        if (value.is_object()) {
            Term child = fresh_blank();
            graph_.insert({node, p, child});
            lift_container(child, value);
            return;
        }
        graph_.insert({node, p, scalar(value)});
    }

    void element(const Term& node, const Term& p, const nlohmann::json& value, size_t index) {
        if (value.is_null()) return;
        if (value.is_object() || value.is_array()) {
            Term child = fresh_blank();
            graph_.insert({node, p, child});
            graph_.insert({child, predicate("_index"),
                           Term::literal(std::to_string(index), rdf::vocab::xsd_integer)});
            lift_container(child, value);
            return;
        }
        // scalar array elements carry no _index; their order is dropped
        graph_.insert({node, p, scalar(value)});
    }

    const LiftConfig& cfg_;
    Graph graph_;
    size_t blank_counter_ = 0;
};

} // namespace detail

/// Deterministic, schema-agnostic lifting of a JSON value to RDF.
/// Objects and arrays become nodes (the root is cfg.root, everything else a
/// fresh blank node); keys become predicates under cfg.base; scalars become
/// typed literals; null produces nothing.
inline Graph lift_json(const nlohmann::json& doc, const LiftConfig& cfg) {
    cfg.validate();
    return detail::Lifter(cfg).run(doc);
}

inline Graph lift_json(const std::string& text, const LiftConfig& cfg) {
    return lift_json(nlohmann::json::parse(text), cfg);
}

} // namespace fedql::lift
