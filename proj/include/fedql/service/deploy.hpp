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
#include <string>
#include <vector>

#include "fedql/bench/mock_api.hpp"
#include "fedql/fed/federator.hpp"
#include "fedql/service/config.hpp"
#include "fedql/service/graph_endpoint.hpp"
#include "fedql/service/micro_service.hpp"

namespace fedql::service {

/// Everything a deployment config declares, wired up and running: mock
/// upstream APIs on their own ports, one server hosting the micro-services
/// and native graph endpoints, and the federator.
class Deployment {
public:
    explicit Deployment(const DeployConfig& cfg, bool disable_cache = cache_disabled_by_env(),
                        fed::Federator::LogSink log = nullptr, std::string host = "127.0.0.1")
        : host_(std::move(host)) {
        cfg.validate();
        for (const auto& m : cfg.mock_apis) {
            auto mock = std::make_unique<bench::MockApiServer>(m.fixture_dir);
            auto handle = std::make_unique<ServerHandle>();
            handle->bind(host_, m.port);
            mock->mount(handle->server());
            mocks_.push_back(std::move(mock));
            mock_handles_.push_back(std::move(handle));
        }
        if (!cfg.services.empty() || !cfg.graphs.empty()) {
            endpoints_handle_ = std::make_unique<ServerHandle>();
            endpoints_handle_->bind(host_, cfg.endpoints_port);
            for (const auto& s : cfg.services) {
                auto mapping = lift::load_mapping_spec(s.mapping_dir);
                services_.push_back(
                    std::make_unique<MicroService>(s, std::move(mapping), disable_cache));
                services_.back()->mount(endpoints_handle_->server());
            }
            for (const auto& g : cfg.graphs) {
                graphs_.push_back(
                    std::make_unique<GraphEndpoint>(GraphEndpoint::from_file(g.route, g.file)));
                graphs_.back()->mount(endpoints_handle_->server());
            }
        }
        if (cfg.federator) {
            fed::FederationConfig fc;
            fc.allow = cfg.federator->allow;
            fc.chunk_size = cfg.federator->chunk_size;
            fc.timeout = cfg.federator->timeout;
            fc.max_remote_calls = cfg.federator->max_remote_calls;
            federator_ = std::make_unique<fed::Federator>(
                fc, fed::http_remote_client(fc.timeout), std::move(log));
            federator_handle_ = std::make_unique<ServerHandle>();
            federator_handle_->bind(host_, cfg.federator->port);
            federator_->mount(federator_handle_->server());
        }
    }

    void start() {
        for (auto& h : mock_handles_) h->start();
        if (endpoints_handle_) endpoints_handle_->start();
        if (federator_handle_) federator_handle_->start();
    }

    void stop() {
        if (federator_handle_) federator_handle_->stop();
        if (endpoints_handle_) endpoints_handle_->stop();
        for (auto& h : mock_handles_) h->stop();
    }

    std::vector<std::string> listen_urls() const {
        std::vector<std::string> out;
        for (size_t i = 0; i < mock_handles_.size(); ++i)
            out.push_back(mock_handles_[i]->base_url() + "/api/network  (mock API)");
        if (endpoints_handle_) {
            for (const auto& s : services_)
                out.push_back(endpoints_handle_->base_url() + "/srv/" + s->config().route +
                              "/sparql  (micro-service)");
            for (const auto& g : graphs_)
                out.push_back(endpoints_handle_->base_url() + "/graph/" + g->route() +
                              "/sparql  (native endpoint)");
        }
        if (federator_handle_)
            out.push_back(federator_handle_->base_url() + "/federate/sparql  (federator)");
        return out;
    }

    bench::MockApiServer* mock_api(size_t i = 0) { return mocks_.at(i).get(); }
    MicroService* micro_service(size_t i = 0) { return services_.at(i).get(); }
    fed::Federator* federator() { return federator_.get(); }
    std::string endpoints_base() const { return endpoints_handle_->base_url(); }
    std::string federator_base() const { return federator_handle_->base_url(); }

private:
    std::string host_;
    std::vector<std::unique_ptr<bench::MockApiServer>> mocks_;
    std::vector<std::unique_ptr<ServerHandle>> mock_handles_;
    std::vector<std::unique_ptr<MicroService>> services_;
    std::vector<std::unique_ptr<GraphEndpoint>> graphs_;
    std::unique_ptr<ServerHandle> endpoints_handle_;
    std::unique_ptr<fed::Federator> federator_;
    std::unique_ptr<ServerHandle> federator_handle_;
};

} // namespace fedql::service
