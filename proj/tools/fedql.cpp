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

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "fedql/fedql.hpp"

namespace {

// exit codes: 0 ok, 1 usage, 2 verification mismatch, 3 transport failure
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kMismatch = 2;
constexpr int kTransport = 3;

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop = true; }

int cmd_serve(const std::string& config_path) {
    auto cfg = fedql::service::load_deploy_config(config_path);
    fedql::service::Deployment deployment(
        cfg, fedql::service::cache_disabled_by_env(),
        [](const std::string& line) { std::cout << line << std::endl; });
    deployment.start();
    for (const auto& url : deployment.listen_urls()) std::cout << "listening: " << url << "\n";
    std::cout.flush();
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    deployment.stop();
    return kOk;
}

int cmd_gen_fixtures(uint64_t seed, int genes, int interactions, const std::string& out,
                     const std::string& host, int mock_port, int endpoints_port,
                     int federator_port) {
    fedql::bench::GenOptions opt;
    opt.seed = seed;
    opt.n_genes = genes;
    opt.n_interactions = interactions;
    opt.out_dir = out;
    opt.host = host;
    opt.mock_port = mock_port;
    opt.endpoints_port = endpoints_port;
    opt.federator_port = federator_port;
    auto fx = fedql::bench::gen_fixtures(opt);
    std::cout << "fixtures written to " << out << "\n"
              << "  genes:        " << fx.genes.size() << "\n"
              << "  orthologs:    " << fx.orthologs.size() << "\n"
              << "  interactions: " << fx.interactions.size() << "\n"
              << "  queries:      " << fx.expected.size() << " (expected.json has the oracle counts)\n";
    return kOk;
}

int cmd_query(const std::string& endpoint, const std::string& file, const std::string& accept) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        std::cerr << "cannot read " << file << "\n";
        return kUsage;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto url = fedql::util::parse_url(endpoint);
    httplib::Client client(url.base);
    client.set_read_timeout(std::chrono::seconds(60));
    httplib::Headers headers;
    if (!accept.empty()) headers.emplace("Accept", accept);
    auto res = client.Post(url.path_and_query(), headers, text, fedql::service::kSparqlQuery);
    if (!res) {
        std::cerr << "transport failure: " << httplib::to_string(res.error()) << "\n";
        return kTransport;
    }
    std::cout << res->body;
    if (!res->body.empty() && res->body.back() != '\n') std::cout << "\n";
    if (res->status != 200) {
        std::cerr << "status " << res->status << "\n";
        return kTransport;
    }
    return kOk;
}

int cmd_bench(const std::string& config_path, int repeat, bool cache, const std::string& tsv) {
    auto cfg = fedql::bench::load_bench_config(config_path);
    fedql::bench::BenchReport report;
    try {
        report = fedql::bench::bench_run(cfg, repeat, cache);
    } catch (const fedql::RemoteError& e) {
        std::cerr << "transport failure: " << e.what() << "\n";
        return kTransport;
    }
    std::cout << "repetitions: " << report.repetitions
              << "   caching: " << (report.cache_mode ? "enabled" : "disabled") << "\n";
    std::cout << report.to_table();
    for (const auto& r : report.rows) {
        if (r.api_hits_delta >= 0)
            std::cout << "# " << r.name << ": upstream API hits during runs: " << r.api_hits_delta
                      << "\n";
    }
    if (!tsv.empty()) {
        std::ofstream out(tsv, std::ios::trunc);
        out << report.to_tsv();
        std::cout << "TSV written to " << tsv << "\n";
    }
    if (!report.ok) {
        std::cerr << "verification mismatch: at least one query disagreed with expected.json\n";
        return kMismatch;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fedql — federated SPARQL over Web APIs and native RDF stores"};
    app.require_subcommand(1);

    std::string config_path;
    auto* serve = app.add_subcommand("serve", "start every component declared in a deploy config");
    serve->add_option("--config", config_path, "deploy.json path")->required();

    uint64_t seed = 42;
    int genes = 200, interactions = 500;
    std::string out_dir = "fixtures";
    std::string host = "127.0.0.1";
    int mock_port = 8091, endpoints_port = 8092, federator_port = 8093;
    auto* gen = app.add_subcommand("gen-fixtures", "generate the deterministic workbench fixtures");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--genes", genes, "number of genes (>= 2)");
    gen->add_option("--interactions", interactions, "number of interactions");
    gen->add_option("--out", out_dir, "output directory")->required();
    gen->add_option("--host", host, "host burnt into configs and queries");
    gen->add_option("--mock-port", mock_port, "mock API port");
    gen->add_option("--endpoints-port", endpoints_port, "micro-service/native endpoint port");
    gen->add_option("--federator-port", federator_port, "federator port");

    std::string endpoint, query_file, accept;
    auto* query = app.add_subcommand("query", "send one query file to a SPARQL endpoint");
    query->add_option("--endpoint", endpoint, "endpoint URL")->required();
    query->add_option("--file", query_file, "query file (.rq)")->required();
    query->add_option("--accept", accept, "Accept header value");

    std::string bench_config, tsv_path;
    int repeat = 10;
    bool cache = false;
    auto* bench = app.add_subcommand("bench", "run the benchmark protocol against a federator");
    bench->add_option("--config", bench_config, "bench.json path")->required();
    bench->add_option("--repeat", repeat, "repetitions per query");
    bench->add_flag("--cache", cache, "expect server-side caching enabled");
    bench->add_option("--tsv", tsv_path, "also write the report as TSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*serve) return cmd_serve(config_path);
        if (*gen)
            return cmd_gen_fixtures(seed, genes, interactions, out_dir, host, mock_port,
                                    endpoints_port, federator_port);
        if (*query) return cmd_query(endpoint, query_file, accept);
        if (*bench) return cmd_bench(bench_config, repeat, cache, tsv_path);
    } catch (const fedql::RemoteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTransport;
    } catch (const fedql::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
