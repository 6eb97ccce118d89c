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

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fedql/rdf/term.hpp"

namespace fedql::rdf {

/// One RDF statement. The constructor enforces the positional constraints:
/// a literal can never be a subject and the predicate is always an IRI.
struct Triple {
    Triple(Term s, Term p, Term o)
        : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
        if (subject.is_literal()) throw Error("triple subject must not be a literal");
        if (!predicate.is_iri()) throw Error("triple predicate must be an IRI");
    }

    Term subject;
    Term predicate;
    Term object;

    bool operator==(const Triple&) const = default;
};

/// Wildcard-or-term for match(). std::nullopt matches anything.
using TermPattern = std::optional<Term>;

/// In-memory triple set with three permutation indexes (SPO, POS, OSP).
/// Terms are interned once; the indexes hold id triples, so a lookup walks a
/// contiguous id range. Many concurrent readers are fine once writes stop;
/// a single writer must be exclusive.
class Graph {
    using Id = uint32_t;
    using IdTriple = std::array<Id, 3>;
    static constexpr Id kMaxId = std::numeric_limits<Id>::max();

public:
    /// Returns true iff the triple was not already present.
    bool insert(const Triple& t) {
        IdTriple spo{intern(t.subject), intern(t.predicate), intern(t.object)};
        auto [it, added] = spo_.insert(spo);
        if (!added) return false;
        pos_.insert({spo[1], spo[2], spo[0]});
        osp_.insert({spo[2], spo[0], spo[1]});
        return true;
    }

    size_t size() const { return spo_.size(); }
    bool empty() const { return spo_.empty(); }

    bool contains(const Triple& t) const {
        auto s = lookup(t.subject), p = lookup(t.predicate), o = lookup(t.object);
        if (!s || !p || !o) return false;
        return spo_.count({*s, *p, *o}) > 0;
    }

    /// All triples agreeing with the concrete positions. Picks the index
    /// whose bound prefix is longest: SPO for s(+p), POS for p(+o),
    /// OSP for o(+s); a fully bound pattern is a containment probe.
    std::vector<Triple> match(const TermPattern& s, const TermPattern& p,
                              const TermPattern& o) const {
        std::optional<Id> si, pi, oi;
        if (s && !(si = lookup(*s))) return {};
        if (p && !(pi = lookup(*p))) return {};
        if (o && !(oi = lookup(*o))) return {};

        std::vector<Triple> out;
        auto emit_spo = [&](const IdTriple& t) { out.push_back(triple_of(t[0], t[1], t[2])); };

        if (si && pi && oi) {
            if (spo_.count({*si, *pi, *oi})) emit_spo({*si, *pi, *oi});
        } else if (si && pi) {
            scan(spo_, {*si, *pi}, emit_spo);
        } else if (pi && oi) {
            scan(pos_, {*pi, *oi}, [&](const IdTriple& t) { out.push_back(triple_of(t[2], t[0], t[1])); });
        } else if (oi && si) {
            scan(osp_, {*oi, *si}, [&](const IdTriple& t) { out.push_back(triple_of(t[1], t[2], t[0])); });
        } else if (si) {
            scan(spo_, {*si}, emit_spo);
        } else if (pi) {
            scan(pos_, {*pi}, [&](const IdTriple& t) { out.push_back(triple_of(t[2], t[0], t[1])); });
        } else if (oi) {
            scan(osp_, {*oi}, [&](const IdTriple& t) { out.push_back(triple_of(t[1], t[2], t[0])); });
        } else {
            for (const auto& t : spo_) emit_spo(t);
        }
        return out;
    }

    /// Every triple, in deterministic (interned SPO) order.
    std::vector<Triple> triples() const {
        std::vector<Triple> out;
        out.reserve(spo_.size());
        for (const auto& t : spo_) out.push_back(triple_of(t[0], t[1], t[2]));
        return out;
    }

    /// All blank node labels appearing anywhere in the graph.
    std::set<std::string> blank_labels() const {
        std::set<std::string> out;
        for (const auto& term : terms_)
            if (term.is_blank()) out.insert(term.value());
        return out;
    }

private:
    template <typename Index, typename Emit>
    static void scan(const Index& idx, std::initializer_list<Id> prefix, Emit emit) {
        IdTriple lo{0, 0, 0}, hi{kMaxId, kMaxId, kMaxId};
        size_t i = 0;
        for (Id v : prefix) {
            lo[i] = v;
            hi[i] = v;
            ++i;
        }
        for (auto it = idx.lower_bound(lo); it != idx.end() && *it <= hi; ++it) emit(*it);
    }

    Id intern(const Term& t) {
        auto it = ids_.find(t);
        if (it != ids_.end()) return it->second;
        Id id = static_cast<Id>(terms_.size());
        terms_.push_back(t);
        ids_.emplace(t, id);
        return id;
    }

    std::optional<Id> lookup(const Term& t) const {
        auto it = ids_.find(t);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    Triple triple_of(Id s, Id p, Id o) const { return {terms_[s], terms_[p], terms_[o]}; }

    std::vector<Term> terms_;
    std::unordered_map<Term, Id, TermHash> ids_;
    std::set<IdTriple> spo_, pos_, osp_;
};

/// Set union. Blank nodes of `b` are rewritten onto fresh labels so they can
/// never capture blanks of `a`; `a`'s labels are kept, so union(g, empty) is
/// exactly g.
inline Graph union_graphs(const Graph& a, const Graph& b) {
    Graph out = a;
    auto taken = a.blank_labels();
    std::map<std::string, std::string> renames;
    size_t next = 0;
    auto fresh = [&]() {
        std::string label;
        do {
            label = "u" + std::to_string(next++);
        } while (taken.count(label));
        return label;
    };
    auto rename = [&](const Term& t) -> Term {
        if (!t.is_blank()) return t;
        auto it = renames.find(t.value());
        if (it == renames.end()) it = renames.emplace(t.value(), fresh()).first;
        return Term::blank(it->second);
    };
    for (const auto& t : b.triples())
        out.insert({rename(t.subject), t.predicate, rename(t.object)});
    return out;
}

} // namespace fedql::rdf
