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
#include <filesystem>
#include <map>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "fedql/service/config.hpp"
#include "fedql/service/endpoint.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::bench {

/// Deterministic stand-in for the wrapped Web API. Serves fixture JSON from
/// disk keyed by the canonical request parameters; unknown keys answer `[]`
/// with 200. `/_hits` exposes the upstream call counter so tests can verify
/// the caching protocol. An injectable delay supports timeout tests.
class MockApiServer {
public:
    explicit MockApiServer(const std::filesystem::path& fixture_dir) { load(fixture_dir); }

    MockApiServer() = default;

    /// Reads api/index.json: {"<route>": {"<canonical params>": "<file>"}}.
    void load(const std::filesystem::path& fixture_dir) {
        auto index_path = fixture_dir / "index.json";
        nlohmann::json index =
            nlohmann::json::parse(service::detail::read_text_file(index_path));
        for (const auto& [route, entries] : index.items()) {
            for (const auto& [key, file] : entries.items()) {
                bodies_[route][key] =
                    service::detail::read_text_file(fixture_dir / file.get<std::string>());
            }
        }
    }

    void set_delay(std::chrono::milliseconds delay) { delay_ms_ = delay.count(); }

    long hits() const { return hits_.load(); }

    void mount(httplib::Server& server) {
        server.Get("/api/network", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits_;
            long delay = delay_ms_.load();
            if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            std::map<std::string, std::string> params(req.params.begin(), req.params.end());
            std::string key = util::canonical_params(params);
            auto route_it = bodies_.find("network");
            if (route_it != bodies_.end()) {
                auto it = route_it->second.find(key);
                if (it != route_it->second.end()) {
                    res.set_content(it->second, "application/json");
                    return;
                }
            }
            res.set_content("[]", "application/json");
        });
        server.Get("/_hits", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(std::to_string(hits_.load()), "text/plain");
        });
    }

private:
    std::map<std::string, std::map<std::string, std::string>> bodies_; // route -> key -> body
    std::atomic<long> hits_{0};
    std::atomic<long> delay_ms_{0};
};

} // namespace fedql::bench
