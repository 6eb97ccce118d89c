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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "fedql/bench/fixtures.hpp"
#include "fedql/service/config.hpp"
#include "fedql/service/endpoint.hpp"
#include "fedql/sparql/parser.hpp"
#include "fedql/sparql/results.hpp"
#include "fedql/util/url.hpp"

namespace fedql::bench {

struct BenchConfig {
    std::string federator_url;
    std::filesystem::path expected_file;
    std::optional<std::string> hits_url;
    struct Query {
        std::string name;
        std::filesystem::path file;
    };
    std::vector<Query> queries;
};

inline BenchConfig load_bench_config(const std::filesystem::path& file) {
    auto base_dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
    nlohmann::json j = nlohmann::json::parse(service::detail::read_text_file(file));
    BenchConfig out;
    out.federator_url = j.at("federator").get<std::string>();
    out.expected_file = base_dir / j.at("expected").get<std::string>();
    if (j.contains("hits_url")) out.hits_url = j["hits_url"].get<std::string>();
    for (const auto& qj : j.at("queries")) {
        out.queries.push_back(
            {qj.at("name").get<std::string>(), base_dir / qj.at("file").get<std::string>()});
    }
    return out;
}

inline ExpectedMap load_expected(const std::filesystem::path& file) {
    nlohmann::json j = nlohmann::json::parse(service::detail::read_text_file(file));
    ExpectedMap out;
    for (const auto& [name, e] : j.items()) {
        ExpectedResult r;
        r.kind = e.at("kind").get<std::string>();
        r.count = e.at("count").get<long>();
        if (e.contains("results")) r.results_json = e["results"].dump();
        if (e.contains("ntriples")) r.ntriples = e["ntriples"].get<std::string>();
        out[name] = std::move(r);
    }
    return out;
}

/// One row of the benchmark table: mean/std over `repetitions` end-to-end
/// executions plus the retrieved-result count.
struct BenchRow {
    std::string name;
    int repetitions = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
    long count = -1;
    long expected_count = -1;
    bool count_ok = false;
    bool latency_flag = false; // mean >= 1 s (soft target, reported only)
    bool single_run = false;   // n = 1, std reported as 0 by convention
    long api_hits_delta = -1;  // -1 = not observed
};

struct BenchReport {
    std::vector<BenchRow> rows;
    int repetitions = 0;
    bool cache_mode = false;
    bool ok = true;

    std::string to_table() const {
        std::string out;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-8s %10s %15s %19s\n", "Query", "Mean (s)",
                      "Std deviation", "Retrieved results");
        out += buf;
        for (const auto& r : rows) {
            std::string flags;
            if (!r.count_ok) flags += " COUNT-MISMATCH(expected " + std::to_string(r.expected_count) + ")";
            if (r.latency_flag) flags += " SLOW(>1s)";
            if (r.single_run) flags += " n=1";
            std::snprintf(buf, sizeof buf, "%-8s %10.3f %15.3f %19ld%s\n", r.name.c_str(),
                          r.mean_s, r.std_s, r.count, flags.c_str());
            out += buf;
        }
        return out;
    }

    std::string to_tsv() const {
        std::string out = "query\tmean_s\tstd_s\tresults\trepetitions\n";
        char buf[256];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%s\t%.6f\t%.6f\t%ld\t%d\n", r.name.c_str(), r.mean_s,
                          r.std_s, r.count, r.repetitions);
            out += buf;
        }
        return out;
    }
};

namespace detail {

inline long count_ntriples_lines(const std::string& body) {
    long n = 0;
    for (const auto& line : util::split(body, '\n'))
        if (!line.empty()) ++n;
    return n;
}

inline std::optional<long> fetch_hits(const std::string& url) {
    try {
        auto parsed = util::parse_url(url);
        httplib::Client client(parsed.base);
        auto res = client.Get(parsed.path_and_query());
        if (!res || res->status != 200) return std::nullopt;
        return std::stol(res->body);
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace detail

/// The measurement protocol: each query runs `repetitions` times against the
/// federator, timed end-to-end at the client (request write to full response
/// read), strictly sequentially. Every run's result count is verified against
/// the expected file; any mismatch fails the report. Sample standard
/// deviation uses the n-1 denominator.
inline BenchReport bench_run(const BenchConfig& cfg, int repetitions = 10,
                             bool cache_mode = false) {
    if (repetitions < 1) throw Error("repetitions must be >= 1");
    ExpectedMap expected = load_expected(cfg.expected_file);
    auto url = util::parse_url(cfg.federator_url);

    BenchReport report;
    report.repetitions = repetitions;
    report.cache_mode = cache_mode;

    for (const auto& q : cfg.queries) {
        std::string text = service::detail::read_text_file(q.file);
        sparql::QueryAst ast = sparql::parse_query(text); // determines the count method
        bool is_construct = ast.kind == sparql::QueryAst::Kind::Construct;

        auto it = expected.find(q.name);
        if (it == expected.end()) throw Error("no expected entry for query " + q.name);

        BenchRow row;
        row.name = q.name;
        row.repetitions = repetitions;
        row.expected_count = it->second.count;
        row.count_ok = true;

        std::optional<long> hits_before;
        if (cfg.hits_url) hits_before = detail::fetch_hits(*cfg.hits_url);

        httplib::Client client(url.base);
        client.set_read_timeout(std::chrono::seconds(60));
        std::vector<double> seconds;
        seconds.reserve(static_cast<size_t>(repetitions));
        for (int rep = 0; rep < repetitions; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            auto res = client.Post(url.path_and_query(), text, service::kSparqlQuery);
            auto t1 = std::chrono::steady_clock::now();
            if (!res)
                throw RemoteError(cfg.federator_url,
                                  "transport failure (" + httplib::to_string(res.error()) + ")");
            if (res->status != 200)
                throw RemoteError(cfg.federator_url,
                                  "status " + std::to_string(res->status) + " on " + q.name +
                                      ": " + res->body);
            seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

            long count = is_construct ? detail::count_ntriples_lines(res->body)
                                      : static_cast<long>(
                                            sparql::parse_select_results(res->body).rows.size());
            if (rep == 0) row.count = count;
            // the count must agree with the oracle on every single run
            if (count != it->second.count || count != row.count) {
                row.count = count;
                row.count_ok = false;
                report.ok = false;
            }
        }

        if (cfg.hits_url && hits_before) {
            auto hits_after = detail::fetch_hits(*cfg.hits_url);
            if (hits_after) row.api_hits_delta = *hits_after - *hits_before;
        }

        double sum = 0.0;
        for (double s : seconds) sum += s;
        row.mean_s = sum / static_cast<double>(seconds.size());
        if (seconds.size() > 1) {
            double acc = 0.0;
            for (double s : seconds) acc += (s - row.mean_s) * (s - row.mean_s);
            row.std_s = std::sqrt(acc / static_cast<double>(seconds.size() - 1));
        } else {
            row.std_s = 0.0;
            row.single_run = true;
        }
        row.latency_flag = row.mean_s >= 1.0;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace fedql::bench
