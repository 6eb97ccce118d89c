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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fedql/errors.hpp"
#include "fedql/lift/mapping.hpp"

namespace fedql::service {

/// One Web API function exposed as one SPARQL endpoint. A deployment may
/// instantiate the same API function several times with different fixed
/// parameters; each such config is its own data source with its own route.
struct ServiceConfig {
    struct Param {
        std::string name;
        bool required = true;
        std::optional<std::string> default_value;
    };

    std::string name;
    std::string route;
    std::string api_url_template; // {param} placeholders
    std::string method = "GET";   // GET or POST
    std::vector<Param> params;
    std::filesystem::path mapping_dir;
    std::map<std::string, std::string> headers; // static upstream headers
    std::chrono::milliseconds timeout{10000};
    std::chrono::milliseconds cache_ttl{0}; // 0 = caching disabled

    void validate() const {
        if (name.empty() || route.empty()) throw Error("service needs a name and a route");
        if (method != "GET" && method != "POST")
            throw Error("service method must be GET or POST: " + method);
        // every {placeholder} must be a declared parameter
        size_t pos = 0;
        while ((pos = api_url_template.find('{', pos)) != std::string::npos) {
            auto end = api_url_template.find('}', pos);
            if (end == std::string::npos) throw Error("unbalanced '{' in URL template");
            std::string ph = api_url_template.substr(pos + 1, end - pos - 1);
            bool found = false;
            for (const auto& p : params) found |= p.name == ph;
            if (!found) throw Error("URL template placeholder {" + ph + "} has no parameter");
            pos = end + 1;
        }
    }
};

struct GraphEndpointConfig {
    std::string route;
    std::filesystem::path file; // N-Triples
};

struct MockApiConfig {
    std::string name;
    int port = 0;
    std::filesystem::path fixture_dir;
};

struct FederatorConfig {
    int port = 0;
    std::vector<std::string> allow; // empty = allow all
    int chunk_size = 50;
    std::chrono::milliseconds timeout{10000};
    int max_remote_calls = 1000;
};

/// A whole deployment: mock upstream APIs, one endpoint server hosting the
/// micro-services and native graph endpoints, and the federator.
struct DeployConfig {
    std::vector<MockApiConfig> mock_apis;
    int endpoints_port = 0;
    std::vector<ServiceConfig> services;
    std::vector<GraphEndpointConfig> graphs;
    std::optional<FederatorConfig> federator;

    void validate() const {
        std::set<std::string> routes;
        for (const auto& s : services) {
            s.validate();
            if (!routes.insert(s.route).second) throw Error("duplicate route: " + s.route);
        }
        for (const auto& g : graphs)
            if (!routes.insert(g.route).second) throw Error("duplicate route: " + g.route);
    }
};

namespace detail {

inline std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ServiceConfig service_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir) {
    ServiceConfig cfg;
    cfg.name = j.at("name").get<std::string>();
    cfg.route = j.at("route").get<std::string>();
    cfg.api_url_template = j.at("api_url_template").get<std::string>();
    if (j.contains("method")) cfg.method = j["method"].get<std::string>();
    if (j.contains("params")) {
        for (const auto& pj : j["params"]) {
            ServiceConfig::Param p;
            p.name = pj.at("name").get<std::string>();
            if (pj.contains("required")) p.required = pj["required"].get<bool>();
            if (pj.contains("default")) p.default_value = pj["default"].get<std::string>();
            cfg.params.push_back(std::move(p));
        }
    }
    cfg.mapping_dir = base_dir / j.at("mapping").get<std::string>();
    if (j.contains("headers")) {
        for (const auto& [k, v] : j["headers"].items()) cfg.headers[k] = v.get<std::string>();
    }
    if (j.contains("timeout_ms")) cfg.timeout = std::chrono::milliseconds(j["timeout_ms"].get<int64_t>());
    if (j.contains("cache_ttl_s"))
        cfg.cache_ttl = std::chrono::seconds(j["cache_ttl_s"].get<int64_t>());
    return cfg;
}

} // namespace detail

/// Reads a deployment description. Relative paths resolve against the
/// config file's own directory.
inline DeployConfig load_deploy_config(const std::filesystem::path& file) {
    auto base_dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
    nlohmann::json j = nlohmann::json::parse(detail::read_text_file(file));
    DeployConfig out;
    if (j.contains("mock_apis")) {
        for (const auto& mj : j["mock_apis"]) {
            MockApiConfig m;
            m.name = mj.at("name").get<std::string>();
            m.port = mj.at("port").get<int>();
            m.fixture_dir = base_dir / mj.at("fixtures").get<std::string>();
            out.mock_apis.push_back(std::move(m));
        }
    }
    if (j.contains("endpoints")) {
        const auto& ej = j["endpoints"];
        out.endpoints_port = ej.at("port").get<int>();
        if (ej.contains("services"))
            for (const auto& sj : ej["services"])
                out.services.push_back(detail::service_from_json(sj, base_dir));
        if (ej.contains("graphs")) {
            for (const auto& gj : ej["graphs"]) {
                GraphEndpointConfig g;
                g.route = gj.at("route").get<std::string>();
                g.file = base_dir / gj.at("file").get<std::string>();
                out.graphs.push_back(std::move(g));
            }
        }
    }
    if (j.contains("federator")) {
        const auto& fj = j["federator"];
        FederatorConfig f;
        f.port = fj.at("port").get<int>();
        if (fj.contains("allow"))
            for (const auto& a : fj["allow"]) f.allow.push_back(a.get<std::string>());
        if (fj.contains("chunk_size")) f.chunk_size = fj["chunk_size"].get<int>();
        if (fj.contains("timeout_ms"))
            f.timeout = std::chrono::milliseconds(fj["timeout_ms"].get<int64_t>());
        if (fj.contains("max_remote_calls")) f.max_remote_calls = fj["max_remote_calls"].get<int>();
        out.federator = std::move(f);
    }
    out.validate();
    return out;
}

} // namespace fedql::service
