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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fedql/lift/lift.hpp"
#include "fedql/sparql/eval.hpp"
#include "fedql/sparql/parser.hpp"

namespace fedql::lift {

/// One Web API function's road to the domain ontology: lifting configuration
/// plus a CONSTRUCT query over the lifted graph. API call arguments are made
/// visible to the query as variables via `param_vars` (parameter name → var).
struct MappingSpec {
    LiftConfig lift;
    sparql::QueryAst construct;
    std::vector<std::pair<std::string, std::string>> param_vars;

    void validate() const {
        lift.validate();
        if (construct.kind != sparql::QueryAst::Kind::Construct)
            throw Error("mapping query must be a CONSTRUCT");
        if (sparql::contains_service(construct.where))
            throw Error("mapping query must not contain SERVICE");
    }
};

/// Parses a mapping spec from its on-disk layout: a directory holding
/// `mapping.rq` (CONSTRUCT text) and `mapping.json`
/// ({"base":..., "root":..., "param_vars": {...}}).
inline MappingSpec load_mapping_spec(const std::filesystem::path& dir) {
    auto read_file = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error("cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    MappingSpec spec;
    spec.construct = sparql::parse_query(read_file(dir / "mapping.rq"));
    nlohmann::json sidecar = nlohmann::json::parse(read_file(dir / "mapping.json"));
    spec.lift.base = sidecar.at("base").get<std::string>();
    spec.lift.root = sidecar.at("root").get<std::string>();
    if (sidecar.contains("param_vars")) {
        for (const auto& [name, var] : sidecar["param_vars"].items())
            spec.param_vars.emplace_back(name, var.get<std::string>());
    }
    spec.validate();
    return spec;
}

/// Runs the mapping CONSTRUCT over a lifted graph. Parameters are injected
/// as a one-row VALUES block at the front of the WHERE group, binding each
/// configured variable to a plain string literal.
inline rdf::Graph apply_mapping(const rdf::Graph& lifted, const MappingSpec& spec,
                                const std::map<std::string, std::string>& params) {
    spec.validate();
    sparql::QueryAst query = spec.construct;
    if (!spec.param_vars.empty()) {
        sparql::GroupPattern::Element values;
        values.kind = sparql::GroupPattern::Element::Kind::Values;
        std::vector<std::optional<rdf::Term>> row;
        for (const auto& [name, var] : spec.param_vars) {
            auto it = params.find(name);
            if (it == params.end()) throw MissingParam(name);
            values.values_vars.push_back(var);
            row.emplace_back(rdf::Term::literal(it->second));
        }
        values.values_rows.push_back(std::move(row));
        query.where.elements.insert(query.where.elements.begin(), std::move(values));
    }
    return sparql::eval_construct(lifted, query, sparql::failing_service_executor());
}

/// lift_json then apply_mapping: the request-local quasi-virtual fragment.
inline rdf::Graph map_response(const nlohmann::json& doc, const MappingSpec& spec,
                               const std::map<std::string, std::string>& params) {
    return apply_mapping(lift_json(doc, spec.lift), spec, params);
}

} // namespace fedql::lift
