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

#include "fedql/bench/bench.hpp"
#include "fedql/bench/fixtures.hpp"
#include "fedql/bench/mock_api.hpp"
#include "fedql/errors.hpp"
#include "fedql/fed/federator.hpp"
#include "fedql/lift/lift.hpp"
#include "fedql/lift/mapping.hpp"
#include "fedql/rdf/graph.hpp"
#include "fedql/rdf/ntriples.hpp"
#include "fedql/rdf/term.hpp"
#include "fedql/service/cache.hpp"
#include "fedql/service/config.hpp"
#include "fedql/service/deploy.hpp"
#include "fedql/service/endpoint.hpp"
#include "fedql/service/graph_endpoint.hpp"
#include "fedql/service/micro_service.hpp"
#include "fedql/sparql/ast.hpp"
#include "fedql/sparql/eval.hpp"
#include "fedql/sparql/parser.hpp"
#include "fedql/sparql/results.hpp"
#include "fedql/sparql/serializer.hpp"
