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

#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "fedql/rdf/ntriples.hpp"
#include "fedql/sparql/eval.hpp"
#include "fedql/sparql/parser.hpp"
#include "fedql/sparql/results.hpp"
#include "fedql/sparql/serializer.hpp"

namespace fedql::service {

inline constexpr const char* kSparqlResultsJson = "application/sparql-results+json";
inline constexpr const char* kNTriples = "application/n-triples";
inline constexpr const char* kSparqlQuery = "application/sparql-query";

/// Pulls the query text out of a SPARQL protocol request: the `query` GET
/// parameter, a POST body of type application/sparql-query, or a form-encoded
/// `query` field. Empty optional when absent.
inline std::optional<std::string> extract_query_text(const httplib::Request& req) {
    if (req.method == "POST") {
        auto ct = req.get_header_value("Content-Type");
        if (ct.rfind(kSparqlQuery, 0) == 0) return req.body;
    }
    if (req.has_param("query")) return req.get_param_value("query");
    return std::nullopt;
}

inline void set_json_error(httplib::Response& res, int status, const std::string& error,
                           const std::string& detail) {
    nlohmann::json body;
    body["error"] = error;
    body["detail"] = detail;
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

/// Evaluates a parsed query over a frozen graph and fills in the HTTP
/// response: results JSON for SELECT/ASK, canonical N-Triples for CONSTRUCT.
/// The Accept header can only choose between those two types; anything else
/// falls back to the default for the query kind.
inline void respond_with_evaluation(const rdf::Graph& graph, const sparql::QueryAst& ast,
                                    const sparql::ServiceExecutor& svc, httplib::Response& res) {
    if (ast.kind == sparql::QueryAst::Kind::Construct) {
        rdf::Graph out = sparql::eval_construct(graph, ast, svc);
        res.status = 200;
        res.set_content(rdf::serialize_ntriples(out), kNTriples);
    } else {
        sparql::SolutionSequence out = sparql::eval_select(graph, ast, svc);
        res.status = 200;
        res.set_content(sparql::serialize_select_results(out), kSparqlResultsJson);
    }
}

/// Shared protocol behaviour of the leaf endpoints (micro-services and
/// native graph endpoints): parse, reject SERVICE, evaluate, respond.
inline void handle_leaf_query(const rdf::Graph& graph, const std::string& query_text,
                              httplib::Response& res) {
    sparql::QueryAst ast;
    try {
        ast = sparql::parse_query(query_text);
    } catch (const SyntaxError& e) {
        set_json_error(res, 400, "syntax", e.what());
        return;
    } catch (const UnsupportedFeature& e) {
        set_json_error(res, 400, "unsupported", e.what());
        return;
    }
    if (sparql::contains_service(ast.where)) {
        set_json_error(res, 400, "service-not-allowed",
                       "this endpoint is a leaf and cannot dispatch SERVICE blocks");
        return;
    }
    respond_with_evaluation(graph, ast, sparql::failing_service_executor(), res);
}

/// RAII wrapper around an httplib server running on its own thread.
/// Binds to an ephemeral port when none is given.
class ServerHandle {
public:
    ServerHandle() : server_(std::make_unique<httplib::Server>()) {}

    ~ServerHandle() { stop(); }

    ServerHandle(const ServerHandle&) = delete;
    ServerHandle& operator=(const ServerHandle&) = delete;

    httplib::Server& server() { return *server_; }

    /// Bind now (fixing the port) without serving yet.
    int bind(const std::string& host = "127.0.0.1", int port = 0) {
        host_ = host;
        if (port == 0) {
            port_ = server_->bind_to_any_port(host);
        } else {
            if (!server_->bind_to_port(host, port)) throw Error("cannot bind port " + std::to_string(port));
            port_ = port;
        }
        if (port_ <= 0) throw Error("cannot bind a port on " + host);
        return port_;
    }

    void start() {
        if (thread_.joinable()) return;
        if (port_ == 0) bind();
        thread_ = std::thread([this] { server_->listen_after_bind(); });
        server_->wait_until_ready();
    }

    void stop() {
        if (server_) server_->stop();
        if (thread_.joinable()) thread_.join();
    }

    int port() const { return port_; }
    std::string base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

private:
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;
};

} // namespace fedql::service
