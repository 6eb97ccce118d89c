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
#include <string>

#include "httplib.h"

#include "fedql/rdf/ntriples.hpp"
#include "fedql/service/config.hpp"
#include "fedql/service/endpoint.hpp"

namespace fedql::service {

/// A native-store SPARQL endpoint: answers queries over a graph loaded once
/// at startup and frozen from then on. Same leaf protocol surface as the
/// micro-services.
class GraphEndpoint {
public:
    GraphEndpoint(std::string route, rdf::Graph graph)
        : route_(std::move(route)), graph_(std::move(graph)) {}

    /// Loads the graph from an N-Triples file; a parse error fails startup.
    static GraphEndpoint from_file(const std::string& route, const std::filesystem::path& file) {
        return GraphEndpoint(route, rdf::parse_ntriples(detail::read_text_file(file)));
    }

    const rdf::Graph& graph() const { return graph_; }
    const std::string& route() const { return route_; }

    void handle(const httplib::Request& req, httplib::Response& res) const {
        auto query_text = extract_query_text(req);
        if (!query_text) {
            set_json_error(res, 400, "missing-query",
                           "expected a `query` parameter or an application/sparql-query body");
            return;
        }
        try {
            handle_leaf_query(graph_, *query_text, res);
        } catch (const Error& e) {
            set_json_error(res, 500, "internal", e.what());
        }
    }

    /// Registers this endpoint at /graph/{route}/sparql.
    void mount(httplib::Server& server) const {
        std::string path = "/graph/" + route_ + "/sparql";
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        };
        server.Get(path, handler);
        server.Post(path, handler);
    }

private:
    std::string route_;
    rdf::Graph graph_;
};

} // namespace fedql::service
