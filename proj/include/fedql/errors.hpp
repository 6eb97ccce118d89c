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

#include <stdexcept>
#include <string>

namespace fedql {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Query text could not be parsed. Carries the source position.
class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& msg)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line), col(col), detail(msg) {}
    int line;
    int col;
    std::string detail;
};

/// A recognized SPARQL construct that is outside the supported subset.
class UnsupportedFeature : public Error {
public:
    explicit UnsupportedFeature(const std::string& keyword)
        : Error("unsupported SPARQL feature: " + keyword), keyword(keyword) {}
    std::string keyword;
};

/// A SPARQL results JSON document that does not follow the expected structure.
class MalformedResults : public Error {
public:
    explicit MalformedResults(const std::string& reason)
        : Error("malformed results document: " + reason), reason(reason) {}
    std::string reason;
};

/// N-Triples input rejected. Line is 1-based.
class NTriplesError : public Error {
public:
    NTriplesError(int line, const std::string& msg)
        : Error("N-Triples error at line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

/// A required API parameter was neither supplied nor defaulted.
class MissingParam : public Error {
public:
    explicit MissingParam(const std::string& name)
        : Error("missing required parameter: " + name), name(name) {}
    std::string name;
};

/// Upstream Web API returned a non-2xx status.
class UpstreamError : public Error {
public:
    explicit UpstreamError(int status)
        : Error("upstream API error, status " + std::to_string(status)), status(status) {}
    int status;
};

/// Upstream Web API did not answer within the configured timeout.
class UpstreamTimeout : public Error {
public:
    UpstreamTimeout() : Error("upstream API timeout") {}
};

/// Upstream Web API answered with a body that is not valid JSON.
class InvalidJson : public Error {
public:
    explicit InvalidJson(const std::string& why) : Error("upstream body is not valid JSON: " + why) {}
};

/// A remote SPARQL endpoint call failed (transport, status or body).
class RemoteError : public Error {
public:
    RemoteError(const std::string& endpoint, const std::string& what)
        : Error("remote endpoint " + endpoint + ": " + what), endpoint(endpoint) {}
    std::string endpoint;
};

/// SERVICE names an endpoint outside the federation allowlist.
class EndpointNotAllowed : public Error {
public:
    explicit EndpointNotAllowed(const std::string& iri)
        : Error("endpoint not allowed: " + iri), iri(iri) {}
    std::string iri;
};

/// The per-query remote call cap was hit.
class QueryBudgetExceeded : public Error {
public:
    explicit QueryBudgetExceeded(int limit)
        : Error("query exceeded the remote call budget of " + std::to_string(limit)), limit(limit) {}
    int limit;
};

} // namespace fedql
