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

#include <map>
#include <string>

#include "fedql/errors.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::util {

/// A parsed http URL, split the way cpp-httplib wants it: a scheme://host:port
/// base for the client, plus path and raw query string.
struct Url {
    std::string base;  // "http://host:port"
    std::string path;  // "/a/b", never empty (defaults to "/")
    std::string query; // raw query string, no leading '?'

    std::string path_and_query() const {
        return query.empty() ? path : path + "?" + query;
    }
    std::string full() const { return base + path_and_query(); }
};

inline Url parse_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error("not an absolute http URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    Url out;
    if (path_start == std::string::npos) {
        out.base = url;
        out.path = "/";
        return out;
    }
    out.base = url.substr(0, path_start);
    auto rest = url.substr(path_start);
    auto q = rest.find('?');
    if (q == std::string::npos) {
        out.path = rest;
    } else {
        out.path = rest.substr(0, q);
        out.query = rest.substr(q + 1);
    }
    if (out.path.empty()) out.path = "/";
    return out;
}

/// Decodes "a=1&b=2" into a map. Later duplicates win.
inline std::map<std::string, std::string> parse_query_params(const std::string& query) {
    std::map<std::string, std::string> out;
    if (query.empty()) return out;
    for (const auto& pair : split(query, '&')) {
        if (pair.empty()) continue;
        auto eq = pair.find('=');
        if (eq == std::string::npos) {
            out[pct_decode(pair)] = "";
        } else {
            out[pct_decode(pair.substr(0, eq))] = pct_decode(pair.substr(eq + 1));
        }
    }
    return out;
}

/// Endpoint IRIs may carry API arguments in their query string; the allowlist
/// matches on the base endpoint with the query stripped.
inline std::string strip_query(const std::string& url) {
    auto q = url.find('?');
    return q == std::string::npos ? url : url.substr(0, q);
}

} // namespace fedql::util
