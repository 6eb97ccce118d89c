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

#include <atomic>
#include <chrono>
#include <functional>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "fedql/service/endpoint.hpp"
#include "fedql/sparql/eval.hpp"
#include "fedql/sparql/parser.hpp"
#include "fedql/sparql/results.hpp"
#include "fedql/sparql/serializer.hpp"
#include "fedql/util/url.hpp"

namespace fedql::fed {

using sparql::Binding;
using sparql::GroupPattern;
using sparql::QueryAst;
using sparql::SolutionSequence;

struct FederationConfig {
    std::vector<std::string> allow; // endpoints permitted in SERVICE; empty = allow all
    int chunk_size = 50;
    std::chrono::milliseconds timeout{10000};
    int max_remote_calls = 1000;

    void validate() const {
        if (chunk_size < 1) throw Error("chunk size must be >= 1");
    }
};

/// One remote SPARQL request: POSTs the query text as
/// application/sparql-query and returns the results JSON body.
/// Implementations must be callable from several threads at once.
using RemoteClient =
    std::function<std::string(const std::string& endpoint, const std::string& query)>;

/// The production client. A fresh connection per invocation keeps the
/// contract of one HTTP request per call and makes the callable thread-safe.
inline RemoteClient http_remote_client(std::chrono::milliseconds timeout) {
    return [timeout](const std::string& endpoint, const std::string& query) -> std::string {
        util::Url url;
        try {
            url = util::parse_url(endpoint);
        } catch (const Error& e) {
            throw RemoteError(endpoint, e.what());
        }
        httplib::Client client(url.base);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        auto result = client.Post(url.path_and_query(), query, service::kSparqlQuery);
        if (!result) {
            auto err = result.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                throw RemoteError(endpoint, "timeout");
            throw RemoteError(endpoint, "transport failure (" + httplib::to_string(err) + ")");
        }
        if (result->status != 200)
            throw RemoteError(endpoint, "status " + std::to_string(result->status));
        return result->body;
    };
}

// ---- planning ----------------------------------------------------------------

struct ExecutionPlan {
    std::vector<std::string> service_endpoints; // textual order
    std::vector<std::string> warnings;
};

namespace detail {

inline void walk_plan(const GroupPattern& g, ExecutionPlan& plan, bool& local_triples) {
    for (const auto& el : g.elements) {
        switch (el.kind) {
        case GroupPattern::Element::Kind::Triples:
            local_triples = true;
            break;
        case GroupPattern::Element::Kind::Service:
            plan.service_endpoints.push_back(el.service_endpoint);
            break;
        case GroupPattern::Element::Kind::Optional:
            for (const auto& child : el.body) walk_plan(child, plan, local_triples);
            break;
        default:
            break;
        }
    }
}

inline bool endpoint_allowed(const std::string& endpoint, const std::vector<std::string>& allow) {
    if (allow.empty()) return true;
    std::string stripped = util::strip_query(endpoint);
    for (const auto& a : allow)
        if (a == endpoint || a == stripped) return true;
    return false;
}

/// Variables mentioned anywhere in a group, filters included — the join
/// variables a bound join must ship to the remote side.
inline void mentioned_vars(const GroupPattern& g, std::set<std::string>& out) {
    auto expr_vars = [&](const sparql::Expression& e, auto&& self) -> void {
        if (e.kind == sparql::Expression::Kind::VarRef) out.insert(e.var);
        for (const auto& a : e.args) self(a, self);
    };
    for (const auto& el : g.elements) {
        for (const auto& tp : el.triples)
            for (const sparql::PatternTerm* p : {&tp.subject, &tp.predicate, &tp.object})
                if (sparql::is_var(*p)) out.insert(sparql::as_var(*p).name);
        if (el.kind == GroupPattern::Element::Kind::Filter) expr_vars(el.filter, expr_vars);
        for (const auto& v : el.values_vars) out.insert(v);
        for (const auto& child : el.body) mentioned_vars(child, out);
    }
}

} // namespace detail

/// The trivial plan: elements run in textual order. The federator holds no
/// data, so a top-level triples element earns a warning; endpoints outside
/// the allowlist fail here, before any network I/O.
inline ExecutionPlan plan(const QueryAst& ast, const FederationConfig& cfg) {
    ExecutionPlan out;
    bool local_triples = false;
    detail::walk_plan(ast.where, out, local_triples);
    if (local_triples)
        out.warnings.push_back(
            "query has triple patterns outside SERVICE: the federator stores no data, "
            "they match nothing");
    for (const auto& ep : out.service_endpoints)
        if (!detail::endpoint_allowed(ep, cfg.allow)) throw EndpointNotAllowed(ep);
    return out;
}

// ---- bound-join service execution ---------------------------------------------

/// Shared mutable state of one federated query evaluation.
struct QueryRuntime {
    std::atomic<int> remote_calls{0};
    std::atomic<int> response_seq{0};
};

namespace detail {

/// Blank nodes are scoped to the response that produced them: relabeling
/// with a per-response prefix keeps blanks from different responses apart.
inline SolutionSequence scope_blanks(SolutionSequence s, int seq) {
    std::string prefix = "s" + std::to_string(seq) + "x";
    for (auto& row : s.rows) {
        for (auto& [var, term] : row) {
            if (term.is_blank()) term = rdf::Term::blank(prefix + term.value());
        }
    }
    return s;
}

inline std::string render_service_query(const std::vector<std::string>& join_vars,
                                        const std::vector<Binding>& chunk,
                                        const GroupPattern& body) {
    QueryAst q;
    q.kind = QueryAst::Kind::Select;
    q.select_star = true;
    if (!join_vars.empty()) {
        GroupPattern::Element values;
        values.kind = GroupPattern::Element::Kind::Values;
        values.values_vars = join_vars;
        for (const auto& row : chunk) {
            std::vector<std::optional<rdf::Term>> cells;
            for (const auto& v : join_vars) {
                auto it = row.find(v);
                if (it == row.end())
                    cells.emplace_back(std::nullopt); // UNDEF
                else
                    cells.emplace_back(it->second);
            }
            values.values_rows.push_back(std::move(cells));
        }
        q.where.elements.push_back(std::move(values));
    }
    for (const auto& el : body.elements) q.where.elements.push_back(el);
    return sparql::serialize_query(q);
}

} // namespace detail

/// Bound join against one endpoint: the incoming rows' projections onto the
/// shared variables are deduplicated, chunked, shipped as VALUES blocks
/// (UNDEF for unbound), and the remote rows are merged back against the
/// incoming rows. Chunks may run concurrently; results keep chunk order.
inline SolutionSequence execute_service(const std::string& endpoint, const GroupPattern& body,
                                        const SolutionSequence& incoming,
                                        const FederationConfig& cfg, const RemoteClient& client,
                                        QueryRuntime& runtime) {
    std::set<std::string> body_vars;
    detail::mentioned_vars(body, body_vars);
    std::vector<std::string> join_vars;
    for (const auto& v : incoming.vars)
        if (body_vars.count(v)) join_vars.push_back(v);

    SolutionSequence out;
    out.vars = incoming.vars;
    {
        std::set<std::string> seen(incoming.vars.begin(), incoming.vars.end());
        for (const auto& v : sparql::in_scope_vars(body))
            if (seen.insert(v).second) out.vars.push_back(v);
    }
    if (incoming.rows.empty()) return out;

    auto fetch = [&](const std::string& query) -> SolutionSequence {
        if (runtime.remote_calls.fetch_add(1) + 1 > cfg.max_remote_calls)
            throw QueryBudgetExceeded(cfg.max_remote_calls);
        std::string json = client(endpoint, query);
        int seq = runtime.response_seq.fetch_add(1);
        try {
            return detail::scope_blanks(sparql::parse_select_results(json), seq);
        } catch (const MalformedResults& e) {
            throw RemoteError(endpoint, e.what());
        }
    };

    if (join_vars.empty()) {
        // nothing to bind: one request, cross-joined with the incoming rows
        SolutionSequence remote = fetch(detail::render_service_query({}, {}, body));
        for (const auto& row : incoming.rows)
            for (const auto& rrow : remote.rows)
                if (auto merged = sparql::merge_bindings(row, rrow))
                    out.rows.push_back(std::move(*merged));
        return out;
    }

    // deduplicate the join projections globally, then chunk
    auto project = [&](const Binding& row) {
        Binding p;
        for (const auto& v : join_vars) {
            auto it = row.find(v);
            if (it != row.end()) p.emplace(it->first, it->second);
        }
        return p;
    };
    std::vector<Binding> distinct;
    std::map<Binding, size_t> projection_index;
    std::vector<size_t> row_projection(incoming.rows.size());
    for (size_t i = 0; i < incoming.rows.size(); ++i) {
        Binding p = project(incoming.rows[i]);
        auto [it, added] = projection_index.emplace(std::move(p), distinct.size());
        if (added) distinct.push_back(project(incoming.rows[i]));
        row_projection[i] = it->second;
    }

    size_t chunk_size = static_cast<size_t>(cfg.chunk_size);
    size_t n_chunks = (distinct.size() + chunk_size - 1) / chunk_size;

    std::vector<std::future<SolutionSequence>> futures;
    futures.reserve(n_chunks);
    for (size_t c = 0; c < n_chunks; ++c) {
        size_t begin = c * chunk_size;
        size_t end = std::min(distinct.size(), begin + chunk_size);
        std::vector<Binding> chunk(distinct.begin() + static_cast<std::ptrdiff_t>(begin),
                                   distinct.begin() + static_cast<std::ptrdiff_t>(end));
        futures.push_back(std::async(std::launch::async, [&, chunk = std::move(chunk)] {
            return fetch(detail::render_service_query(join_vars, chunk, body));
        }));
    }

    for (size_t c = 0; c < n_chunks; ++c) {
        SolutionSequence remote = futures[c].get();
        size_t begin = c * chunk_size;
        size_t end = std::min(distinct.size(), begin + chunk_size);
        for (size_t i = 0; i < incoming.rows.size(); ++i) {
            if (row_projection[i] < begin || row_projection[i] >= end) continue;
            for (const auto& rrow : remote.rows)
                if (auto merged = sparql::merge_bindings(incoming.rows[i], rrow))
                    out.rows.push_back(std::move(*merged));
        }
    }
    return out;
}

// ---- federated evaluation ------------------------------------------------------

struct FederatedResult {
    std::optional<SolutionSequence> solutions; // SELECT / ASK
    std::optional<rdf::Graph> graph;           // CONSTRUCT
    int remote_calls = 0;
    std::vector<std::string> warnings;
};

/// End-to-end federated evaluation: plan, then run the shared evaluator over
/// an empty local graph with a bound-join ServiceExecutor. Solution modifiers
/// apply here, at the federator.
inline FederatedResult eval_federated(const QueryAst& ast, const FederationConfig& cfg,
                                      const RemoteClient& client) {
    cfg.validate();
    ExecutionPlan p = plan(ast, cfg);
    QueryRuntime runtime;
    sparql::ServiceExecutor executor = [&](const std::string& endpoint, const GroupPattern& body,
                                           const SolutionSequence& incoming) {
        return execute_service(endpoint, body, incoming, cfg, client, runtime);
    };
    static const rdf::Graph empty_graph;
    FederatedResult out;
    out.warnings = p.warnings;
    if (ast.kind == QueryAst::Kind::Construct) {
        out.graph = sparql::eval_construct(empty_graph, ast, executor);
    } else {
        out.solutions = sparql::eval_select(empty_graph, ast, executor);
    }
    out.remote_calls = runtime.remote_calls.load();
    return out;
}

// ---- HTTP surface ---------------------------------------------------------------

/// The federation endpoint of the architecture: accepts federated queries at
/// /federate/sparql, dispatches SERVICE blocks, stores nothing locally.
class Federator {
public:
    using LogSink = std::function<void(const std::string& json_line)>;

    Federator(FederationConfig cfg, RemoteClient client, LogSink log = nullptr)
        : cfg_(std::move(cfg)), client_(std::move(client)), log_(std::move(log)) {
        cfg_.validate();
    }

    const FederationConfig& config() const { return cfg_; }
    void set_chunk_size(int n) { cfg_.chunk_size = n; }

    void handle(const httplib::Request& req, httplib::Response& res) const {
        auto query_text = service::extract_query_text(req);
        if (!query_text) {
            service::set_json_error(res, 400, "missing-query",
                                    "expected a `query` parameter or an "
                                    "application/sparql-query body");
            return;
        }
        auto started = std::chrono::steady_clock::now();
        int remote_calls = 0;
        int status = 200;
        try {
            QueryAst ast = sparql::parse_query(*query_text);
            FederatedResult result = eval_federated(ast, cfg_, client_);
            remote_calls = result.remote_calls;
            res.set_header("X-Fedql-Remote-Calls", std::to_string(result.remote_calls));
            if (result.graph) {
                res.status = 200;
                res.set_content(rdf::serialize_ntriples(*result.graph), service::kNTriples);
            } else {
                res.status = 200;
                res.set_content(sparql::serialize_select_results(*result.solutions),
                                service::kSparqlResultsJson);
            }
        } catch (const SyntaxError& e) {
            status = 400;
            service::set_json_error(res, 400, "syntax", e.what());
        } catch (const UnsupportedFeature& e) {
            status = 400;
            service::set_json_error(res, 400, "unsupported", e.what());
        } catch (const EndpointNotAllowed& e) {
            status = 400;
            service::set_json_error(res, 400, "endpoint-not-allowed", e.iri);
        } catch (const QueryBudgetExceeded& e) {
            status = 422;
            service::set_json_error(res, 422, "budget-exceeded", e.what());
        } catch (const RemoteError& e) {
            status = 502;
            nlohmann::json body;
            body["error"] = "remote";
            body["endpoint"] = e.endpoint;
            body["detail"] = e.what();
            res.status = 502;
            res.set_content(body.dump(), "application/json");
        } catch (const Error& e) {
            status = 500;
            service::set_json_error(res, 500, "internal", e.what());
        }
        if (log_) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - started)
                          .count();
            nlohmann::json line;
            line["event"] = "federated-query";
            line["status"] = status;
            line["remote_calls"] = remote_calls;
            line["ms"] = ms;
            log_(line.dump());
        }
    }

    void mount(httplib::Server& server) const {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        };
        server.Get("/federate/sparql", handler);
        server.Post("/federate/sparql", handler);
    }

private:
    FederationConfig cfg_;
    RemoteClient client_;
    LogSink log_;
};

} // namespace fedql::fed
