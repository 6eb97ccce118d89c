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
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "fedql/rdf/graph.hpp"

namespace fedql::service {

/// TTL cache for materialized fragment graphs, keyed by the canonical
/// request key. Expired entries are treated as misses and evicted lazily;
/// a zero TTL bypasses storage entirely. Safe under concurrent use.
class GraphCache {
    using Clock = std::chrono::steady_clock;

    struct Entry {
        std::shared_ptr<const rdf::Graph> graph;
        Clock::time_point expires_at;
    };

public:
    std::shared_ptr<const rdf::Graph> get(const std::string& key) {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        if (Clock::now() >= it->second.expires_at) {
            entries_.erase(it);
            return nullptr;
        }
        return it->second.graph;
    }

    void put(const std::string& key, std::shared_ptr<const rdf::Graph> graph,
             std::chrono::milliseconds ttl) {
        if (ttl.count() <= 0) return;
        std::lock_guard lock(mutex_);
        entries_[key] = {std::move(graph), Clock::now() + ttl};
    }

    size_t size() const {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, Entry> entries_;
};

} // namespace fedql::service
