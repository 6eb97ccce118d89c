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
#include <cstdlib>
#include <map>
#include <memory>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "fedql/lift/mapping.hpp"
#include "fedql/service/cache.hpp"
#include "fedql/service/config.hpp"
#include "fedql/service/endpoint.hpp"
#include "fedql/util/url.hpp"

namespace fedql::service {

inline bool cache_disabled_by_env() {
    const char* v = std::getenv("FEDQL_DISABLE_CACHE");
    return v && std::string(v) == "1";
}

/// A SPARQL micro-service: one Web API function behind one SPARQL endpoint.
/// Per request: extract API arguments, call the API (or the cache), lift and
/// map the JSON response into a request-local graph, evaluate the query over
/// that fragment, respond. Micro-services are leaves: incoming queries may
/// not contain SERVICE.
class MicroService {
public:
    MicroService(ServiceConfig cfg, lift::MappingSpec mapping, bool disable_cache = cache_disabled_by_env())
        : cfg_(std::move(cfg)), mapping_(std::move(mapping)) {
        cfg_.validate();
        mapping_.validate();
        if (disable_cache) cfg_.cache_ttl = std::chrono::milliseconds(0);
    }

    static MicroService from_config(ServiceConfig cfg, bool disable_cache = cache_disabled_by_env()) {
        auto mapping = lift::load_mapping_spec(cfg.mapping_dir);
        return MicroService(std::move(cfg), std::move(mapping), disable_cache);
    }

    const ServiceConfig& config() const { return cfg_; }

    /// Upstream HTTP calls attempted so far.
    long api_hits() const { return api_hits_.load(); }

    /// API arguments are every query parameter except the reserved `query`.
    /// Defaults fill the gaps; a missing required parameter is an error.
    std::map<std::string, std::string> extract_args(const httplib::Request& req) const {
        std::map<std::string, std::string> args;
        for (const auto& [k, v] : req.params)
            if (k != "query") args[k] = v;
        for (const auto& p : cfg_.params) {
            if (args.count(p.name)) continue;
            if (p.default_value) {
                args[p.name] = *p.default_value;
            } else if (p.required) {
                throw MissingParam(p.name);
            }
        }
        return args;
    }

    /// Substitutes {param} placeholders (percent-encoding the values) and
    /// performs the upstream call. Counts one ApiHit per attempt.
    nlohmann::json invoke_api(const std::map<std::string, std::string>& args) const {
        std::string url = substitute_template(args);
        ++api_hits_;

        auto parsed = util::parse_url(url);
        httplib::Client client(parsed.base);
        client.set_connection_timeout(cfg_.timeout);
        client.set_read_timeout(cfg_.timeout);
        httplib::Headers headers(cfg_.headers.begin(), cfg_.headers.end());

        httplib::Result result = cfg_.method == "POST"
                                     ? client.Post(parsed.path_and_query(), headers, "", "text/plain")
                                     : client.Get(parsed.path_and_query(), headers);
        if (!result) {
            auto err = result.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write)
                throw UpstreamTimeout();
            throw UpstreamError(0);
        }
        if (result->status < 200 || result->status >= 300) throw UpstreamError(result->status);
        try {
            return nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidJson(e.what());
        }
    }

    std::string substitute_template(const std::map<std::string, std::string>& args) const {
        std::string out;
        const std::string& tpl = cfg_.api_url_template;
        for (size_t i = 0; i < tpl.size();) {
            if (tpl[i] == '{') {
                auto end = tpl.find('}', i);
                std::string name = tpl.substr(i + 1, end - i - 1);
                auto it = args.find(name);
                if (it == args.end()) throw MissingParam(name);
                out += util::pct_encode(it->second);
                i = end + 1;
            } else {
                out.push_back(tpl[i++]);
            }
        }
        return out;
    }

    /// Canonical cache key: name + '?' + params sorted by name, encoded.
    std::string cache_key(const std::map<std::string, std::string>& args) const {
        return cfg_.name + "?" + util::canonical_params(args);
    }

    /// The fragment graph for one argument set: cache lookup, else
    /// invoke_api -> map_response (-> cache).
    std::shared_ptr<const rdf::Graph> fragment(const std::map<std::string, std::string>& args) const {
        std::string key = cache_key(args);
        if (auto cached = cache_.get(key)) return cached;
        nlohmann::json doc = invoke_api(args);
        auto graph = std::make_shared<const rdf::Graph>(lift::map_response(doc, mapping_, args));
        cache_.put(key, graph, cfg_.cache_ttl);
        return graph;
    }

    void handle(const httplib::Request& req, httplib::Response& res) const {
        auto query_text = extract_query_text(req);
        if (!query_text) {
            set_json_error(res, 400, "missing-query",
                           "expected a `query` parameter or an application/sparql-query body");
            return;
        }
        try {
            auto args = extract_args(req);
            auto graph = fragment(args);
            handle_leaf_query(*graph, *query_text, res);
        } catch (const MissingParam& e) {
            set_json_error(res, 400, "missing-param", e.name);
        } catch (const UpstreamTimeout& e) {
            set_json_error(res, 504, "upstream-timeout", e.what());
        } catch (const UpstreamError& e) {
            set_json_error(res, 502, "upstream-error", e.what());
        } catch (const InvalidJson& e) {
            set_json_error(res, 502, "upstream-invalid-json", e.what());
        } catch (const Error& e) {
            set_json_error(res, 500, "internal", e.what());
        }
    }

    /// Registers this service at /srv/{route}/sparql.
    void mount(httplib::Server& server) const {
        std::string path = "/srv/" + cfg_.route + "/sparql";
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        };
        server.Get(path, handler);
        server.Post(path, handler);
    }

private:
    ServiceConfig cfg_;
    lift::MappingSpec mapping_;
    mutable GraphCache cache_;
    mutable std::atomic<long> api_hits_{0};
};

} // namespace fedql::service
