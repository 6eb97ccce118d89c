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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "fedql/rdf/ntriples.hpp"
#include "fedql/sparql/results.hpp"
#include "fedql/util/strings.hpp"

namespace fedql::bench {

namespace vocab {
inline const std::string oma = "http://fixture.fedql.dev/vocab/oma#";
inline const std::string string_db = "http://fixture.fedql.dev/vocab/string#";
inline const std::string app = "http://fixture.fedql.dev/vocab/app#";
inline const std::string gene_base = "http://fixture.fedql.dev/oma/gene/";
inline const std::string lift_base = "http://fixture.fedql.dev/lift#";
inline const std::string lift_root = "http://fixture.fedql.dev/lift/doc";
inline const std::string wheat = "4565";
inline const std::string rice = "4530";
} // namespace vocab

/// Expected outcome of one workbench query, computed by a brute-force join
/// over the raw fixture lists — never via the query engine.
struct ExpectedResult {
    std::string kind; // "select" or "construct"
    long count = 0;
    std::string results_json; // select: full results document
    std::string ntriples;     // construct: canonical serialization
};

using ExpectedMap = std::map<std::string, ExpectedResult>;

struct GenOptions {
    uint64_t seed = 42;
    int n_genes = 200;
    int n_interactions = 500;
    std::filesystem::path out_dir;
    std::string host = "127.0.0.1";
    int mock_port = 8091;
    int endpoints_port = 8092;
    int federator_port = 8093;
    // the deliberately unreachable endpoint used by the SILENT query
    std::string dead_endpoint = "http://127.0.0.1:9/sparql";
};

struct FixtureSet {
    struct Gene {
        std::string iri, locus, species, label, protein;
    };
    struct Interaction {
        std::string a, b;     // protein ids, a is the queried side
        std::string score;    // lexical form as it appears in the JSON
    };

    uint64_t seed = 0;
    std::vector<Gene> genes;
    std::vector<std::pair<size_t, size_t>> orthologs; // gene indexes, unordered pairs
    std::vector<Interaction> interactions;
    size_t special_gene = 1; // the rice ortholog of the OMT2-analog wheat gene
    size_t probe_gene = 1;   // second queryable protein (falls back to special)
    ExpectedMap expected;
};

namespace detail {

/// Platform-stable generator (xorshift64): identical sequences everywhere,
/// unlike the std distributions.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed * 6364136223846793005ULL + 1442695040888963407ULL) {}
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
};

inline std::string pad4(int n) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04d", n);
    return buf;
}

inline std::string pad3(int n) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%03d", n);
    return buf;
}

/// The lexical form a score gets after the JSON round trip the lifter sees.
inline std::string score_lexical(double v) { return nlohmann::json(v).dump(); }

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << content;
}

} // namespace detail

/// Generates the deterministic desk-scale federation scenario: an OMA-analog
/// gene/ortholog graph and a STRING-analog interaction API, engineered so the
/// OMT2-analog's rice ortholog has exactly min(10, n_interactions)
/// interactions. Same options in, byte-identical tree out.
class FixtureGenerator {
public:
    explicit FixtureGenerator(GenOptions opt) : opt_(std::move(opt)) {
        if (opt_.n_genes < 2) throw Error("fixture generation needs at least 2 genes");
        if (opt_.n_interactions < 0) throw Error("negative interaction count");
    }

    FixtureSet run() {
        build_genes();
        build_orthologs();
        build_interactions();
        compute_expected();
        write_tree();
        fx_.seed = opt_.seed;
        return fx_;
    }

private:
    using Gene = FixtureSet::Gene;
    using Interaction = FixtureSet::Interaction;

    std::string oma_url() const {
        return "http://" + opt_.host + ":" + std::to_string(opt_.endpoints_port) +
               "/graph/oma/sparql";
    }
    std::string string_url() const {
        return "http://" + opt_.host + ":" + std::to_string(opt_.endpoints_port) +
               "/srv/string-network/sparql";
    }
    std::string string_rice_url() const {
        return "http://" + opt_.host + ":" + std::to_string(opt_.endpoints_port) +
               "/srv/string-network-rice/sparql";
    }

    void build_genes() {
        auto add = [&](std::string locus, std::string species, std::string label) {
            Gene g;
            g.locus = std::move(locus);
            g.species = std::move(species);
            g.label = std::move(label);
            g.iri = vocab::gene_base + g.locus;
            g.protein = g.species + "." + g.locus;
            fx_.genes.push_back(std::move(g));
        };
        // the two fixed actors of the ortholog scenario
        add("TRAESOMT2", vocab::wheat, "OMT2");
        add("OS01G0700900", vocab::rice, "OMT2OS");
        for (int i = 2; i < opt_.n_genes; ++i)
            add("G" + detail::pad4(i), i % 2 == 0 ? vocab::rice : vocab::wheat,
                "G" + detail::pad4(i) + "L");
        fx_.special_gene = 1;
        // a single queryable protein: the centralized oracle unions every
        // fragment the mock can serve, so every served fragment must be
        // reachable from the queries' own service arguments
        fx_.probe_gene = 1;
    }

    void build_orthologs() {
        detail::Rng rng(opt_.seed ^ 0x6f727468ULL);
        std::set<std::pair<size_t, size_t>> seen;
        auto add_pair = [&](size_t a, size_t b) {
            auto key = std::minmax(a, b);
            if (!seen.insert({key.first, key.second}).second) return false;
            fx_.orthologs.emplace_back(key.first, key.second);
            return true;
        };
        add_pair(0, 1); // the OMT2 pair

        std::vector<size_t> wheat_pool, rice_pool;
        for (size_t i = 2; i < fx_.genes.size(); ++i)
            (fx_.genes[i].species == vocab::wheat ? wheat_pool : rice_pool).push_back(i);
        size_t target = std::min(wheat_pool.size(), rice_pool.size());
        size_t added = 0;
        size_t attempts = 0;
        while (added < target && attempts < target * 8) {
            ++attempts;
            size_t w = wheat_pool[rng.below(wheat_pool.size())];
            size_t r = rice_pool[rng.below(rice_pool.size())];
            if (add_pair(w, r)) ++added;
        }
    }

    void build_interactions() {
        detail::Rng rng(opt_.seed ^ 0x696e746572ULL);
        const Gene& special = fx_.genes[fx_.special_gene];
        const Gene& probe = fx_.genes[fx_.probe_gene];
        std::set<std::string> queryable = {special.protein, probe.protein};
        std::set<std::pair<std::string, std::string>> seen;
        auto add = [&](std::string a, std::string b, double score) {
            auto key = std::minmax(a, b);
            if (!seen.insert({key.first, key.second}).second) return false;
            fx_.interactions.push_back({std::move(a), std::move(b), detail::score_lexical(score)});
            return true;
        };

        // engineered: the special protein gets exactly min(10, n) interactions
        static const double special_scores[10] = {0.92, 0.45, 0.78, 0.33, 0.88,
                                                  0.51, 0.27, 0.64, 0.19, 0.71};
        int n_special = std::min(10, opt_.n_interactions);
        for (int k = 0; k < n_special; ++k)
            add(special.protein, vocab::rice + ".X" + detail::pad3(k), special_scores[k]);

        // background edges among non-queryable proteins only
        std::vector<std::string> pool;
        for (size_t i = 0; i < fx_.genes.size(); ++i)
            if (!queryable.count(fx_.genes[i].protein)) pool.push_back(fx_.genes[i].protein);
        int extra = std::max(16, opt_.n_interactions / 4);
        for (int k = 0; k < extra; ++k) pool.push_back(vocab::rice + ".Y" + detail::pad3(k));

        int n_rest = opt_.n_interactions - n_special;
        int added = 0;
        size_t attempts = 0;
        size_t max_attempts = static_cast<size_t>(n_rest) * 16 + 64;
        while (added < n_rest && attempts < max_attempts) {
            ++attempts;
            const std::string& a = pool[rng.below(pool.size())];
            const std::string& b = pool[rng.below(pool.size())];
            if (a == b) continue;
            double score = 0.05 + static_cast<double>(rng.below(90)) / 100.0;
            if (add(a, b, score)) ++added;
        }
    }

    // ---- expectations: hand-rolled joins over the raw lists -----------------

    using Term = rdf::Term;

    static sparql::SolutionSequence make_seq(std::vector<std::string> vars) {
        sparql::SolutionSequence s;
        s.vars = std::move(vars);
        return s;
    }

    Term iri(const std::string& v) const { return Term::iri(v); }
    Term str(const std::string& v) const { return Term::literal(v); }
    Term dbl(const std::string& lex) const { return Term::literal(lex, rdf::vocab::xsd_double); }

    std::vector<const Interaction*> incident(const std::string& protein) const {
        std::vector<const Interaction*> out;
        for (const auto& e : fx_.interactions)
            if (e.a == protein || e.b == protein) out.push_back(&e);
        return out;
    }

    void compute_expected() {
        const Gene& special = fx_.genes[fx_.special_gene];
        const Gene& probe = fx_.genes[fx_.probe_gene];
        ExpectedMap& exp = fx_.expected;

        auto finish_select = [&](const std::string& name, sparql::SolutionSequence seq) {
            ExpectedResult r;
            r.kind = "select";
            r.count = static_cast<long>(seq.rows.size());
            r.results_json = sparql::serialize_select_results(seq);
            exp[name] = std::move(r);
        };

        { // Q1a: partners of the probe protein via the single rice service
            auto seq = make_seq({"partner", "score"});
            for (const auto* e : incident(probe.protein)) {
                const std::string& partner = e->a == probe.protein ? e->b : e->a;
                seq.rows.push_back({{"partner", str(partner)}, {"score", dbl(e->score)}});
            }
            finish_select("Q1a", seq);
        }
        { // Q2a: engineered to match nothing
            finish_select("Q2a", make_seq({"g", "x"}));
        }
        { // Q3a: every rice gene, optionally extended by the special network
            auto seq = make_seq({"g", "pid", "partner"});
            for (const auto& g : fx_.genes) {
                if (g.species != vocab::rice) continue;
                if (g.protein == special.protein) {
                    for (const auto* e : incident(special.protein)) {
                        const std::string& partner = e->a == special.protein ? e->b : e->a;
                        seq.rows.push_back({{"g", iri(g.iri)},
                                            {"pid", str(g.protein)},
                                            {"partner", str(partner)}});
                    }
                } else {
                    seq.rows.push_back({{"g", iri(g.iri)}, {"pid", str(g.protein)}});
                }
            }
            finish_select("Q3a", seq);
        }
        { // Q4a: special-network edges with score above the threshold
            auto seq = make_seq({"partner", "score"});
            for (const auto* e : incident(special.protein)) {
                if (std::stod(e->score) <= 0.5) continue;
                const std::string& partner = e->a == special.protein ? e->b : e->a;
                seq.rows.push_back({{"partner", str(partner)}, {"score", dbl(e->score)}});
            }
            finish_select("Q4a", seq);
        }
        { // Q5a: CONSTRUCT of ortholog labels (both directions of each pair)
            rdf::Graph g;
            Term p = iri(vocab::app + "orthologLabel");
            for (const auto& [a, b] : fx_.orthologs) {
                g.insert({iri(fx_.genes[a].iri), p, str(fx_.genes[b].label)});
                g.insert({iri(fx_.genes[b].iri), p, str(fx_.genes[a].label)});
            }
            ExpectedResult r;
            r.kind = "construct";
            r.count = static_cast<long>(g.size());
            r.ntriples = rdf::serialize_ntriples(g);
            exp["Q5a"] = std::move(r);
        }
        { // Q6a: VALUES-seeded label lookup
            auto seq = make_seq({"g", "species"});
            for (const auto& label : q6_labels()) {
                for (const auto& g : fx_.genes)
                    if (g.label == label)
                        seq.rows.push_back({{"g", iri(g.iri)}, {"species", str(g.species)}});
            }
            finish_select("Q6a", seq);
        }
        { // Q7a: OMT2 genes; the SILENT leg contributes nothing
            auto seq = make_seq({"g"});
            for (const auto& g : fx_.genes)
                if (g.label == "OMT2") seq.rows.push_back({{"g", iri(g.iri)}});
            finish_select("Q7a", seq);
        }
        { // Q8a: the two-source join of the paper's headline query
            auto seq = make_seq({"partner", "score"});
            for (const auto& w : fx_.genes) {
                if (!(w.label == "OMT2" && w.species == vocab::wheat)) continue;
                for (const auto& [a, b] : fx_.orthologs) {
                    const Gene* other = nullptr;
                    if (fx_.genes[a].iri == w.iri) other = &fx_.genes[b];
                    if (fx_.genes[b].iri == w.iri) other = &fx_.genes[a];
                    if (!other || other->species != vocab::rice) continue;
                    for (const auto* e : incident(other->protein)) {
                        const std::string& partner = e->a == other->protein ? e->b : e->a;
                        seq.rows.push_back({{"partner", str(partner)}, {"score", dbl(e->score)}});
                    }
                }
            }
            finish_select("Q8a", seq);
        }
    }

    std::vector<std::string> q6_labels() const {
        std::vector<std::string> labels = {"OMT2"};
        if (fx_.genes.size() > 2)
            labels.push_back(fx_.genes[2].label);
        else
            labels.push_back(fx_.genes[1].label);
        return labels;
    }

    // ---- files ----------------------------------------------------------------

    void write_tree() {
        write_oma_graph();
        write_api_fixtures();
        write_mapping();
        write_queries();
        write_expected();
        write_deploy_config();
        write_bench_config();
    }

    void write_oma_graph() {
        rdf::Graph g;
        Term type = iri(rdf::vocab::rdf_type);
        Term cls = iri(vocab::oma + "Gene");
        Term label = iri(vocab::oma + "label");
        Term species = iri(vocab::oma + "species");
        Term xref = iri(vocab::oma + "xrefProtein");
        Term orth = iri(vocab::oma + "orthologousTo");
        for (const auto& gene : fx_.genes) {
            Term s = iri(gene.iri);
            g.insert({s, type, cls});
            g.insert({s, label, str(gene.label)});
            g.insert({s, species, str(gene.species)});
            g.insert({s, xref, str(gene.protein)});
        }
        for (const auto& [a, b] : fx_.orthologs) {
            g.insert({iri(fx_.genes[a].iri), orth, iri(fx_.genes[b].iri)});
            g.insert({iri(fx_.genes[b].iri), orth, iri(fx_.genes[a].iri)});
        }
        detail::write_file(opt_.out_dir / "oma.nt", rdf::serialize_ntriples(g));
    }

    nlohmann::json network_response(const std::string& protein) const {
        nlohmann::json edges = nlohmann::json::array();
        for (const auto* e : incident(protein)) {
            nlohmann::json edge;
            // responses are oriented: the queried protein is always `a`
            edge["a"] = protein;
            edge["b"] = e->a == protein ? e->b : e->a;
            edge["score"] = std::stod(e->score);
            edges.push_back(std::move(edge));
        }
        nlohmann::json doc;
        doc["edges"] = std::move(edges);
        return doc;
    }

    void write_api_fixtures() {
        const Gene& special = fx_.genes[fx_.special_gene];
        const Gene& probe = fx_.genes[fx_.probe_gene];
        nlohmann::json index;
        int file_no = 0;
        auto put = [&](const Gene& gene) {
            std::map<std::string, std::string> params = {{"identifiers", gene.locus},
                                                         {"species", gene.species}};
            std::string key = util::canonical_params(params);
            if (index.contains("network") && index["network"].contains(key)) return;
            std::string file = "net_" + std::to_string(file_no++) + ".json";
            detail::write_file(opt_.out_dir / "api" / file,
                               network_response(gene.protein).dump(2) + "\n");
            index["network"][key] = file;
        };
        put(special);
        put(probe);
        detail::write_file(opt_.out_dir / "api" / "index.json", index.dump(2) + "\n");
    }

    void write_mapping() {
        std::string rq =
            "PREFIX sv: <" + vocab::string_db + ">\n" +
            "PREFIX lift: <" + vocab::lift_base + ">\n" +
            "CONSTRUCT {\n"
            "  ?e sv:proteinA ?a .\n"
            "  ?e sv:proteinB ?b .\n"
            "  ?e sv:score ?s .\n"
            "} WHERE {\n"
            "  <" + vocab::lift_root + "> lift:edges ?e .\n"
            "  ?e lift:a ?a .\n"
            "  ?e lift:b ?b .\n"
            "  ?e lift:score ?s .\n"
            "}\n";
        nlohmann::json sidecar;
        sidecar["base"] = vocab::lift_base;
        sidecar["root"] = vocab::lift_root;
        sidecar["param_vars"] = nlohmann::json::object();
        detail::write_file(opt_.out_dir / "mappings" / "string-network" / "mapping.rq", rq);
        detail::write_file(opt_.out_dir / "mappings" / "string-network" / "mapping.json",
                           sidecar.dump(2) + "\n");
    }

    void write_queries() {
        const Gene& special = fx_.genes[fx_.special_gene];
        const Gene& probe = fx_.genes[fx_.probe_gene];
        std::string oma_prefix = "PREFIX oma: <" + vocab::oma + ">\n";
        std::string sv_prefix = "PREFIX sv: <" + vocab::string_db + ">\n";
        std::string string_special =
            string_url() + "?identifiers=" + special.locus + "&species=" + special.species;

        std::map<std::string, std::string> queries;
        queries["Q1a"] = sv_prefix +
                         "SELECT ?partner ?score WHERE {\n"
                         "  SERVICE <" + string_rice_url() + "?identifiers=" + probe.locus + "> {\n"
                         "    ?i sv:proteinA \"" + probe.protein + "\" .\n"
                         "    ?i sv:proteinB ?partner .\n"
                         "    ?i sv:score ?score .\n"
                         "  }\n"
                         "}\n";
        queries["Q2a"] = oma_prefix +
                         "SELECT ?g ?x WHERE {\n"
                         "  SERVICE <" + oma_url() + "> {\n"
                         "    ?g oma:label \"NOSUCHLABELXYZ\" .\n"
                         "    ?g oma:species ?x .\n"
                         "  }\n"
                         "}\n";
        queries["Q3a"] = oma_prefix + sv_prefix +
                         "SELECT ?g ?pid ?partner WHERE {\n"
                         "  SERVICE <" + oma_url() + "> {\n"
                         "    ?g oma:species \"" + vocab::rice + "\" .\n"
                         "    ?g oma:xrefProtein ?pid .\n"
                         "  }\n"
                         "  OPTIONAL {\n"
                         "    SERVICE <" + string_special + "> {\n"
                         "      ?i sv:proteinA ?pid .\n"
                         "      ?i sv:proteinB ?partner .\n"
                         "    }\n"
                         "  }\n"
                         "}\n";
        queries["Q4a"] = sv_prefix +
                         "SELECT ?partner ?score WHERE {\n"
                         "  SERVICE <" + string_special + "> {\n"
                         "    ?i sv:proteinA \"" + special.protein + "\" .\n"
                         "    ?i sv:proteinB ?partner .\n"
                         "    ?i sv:score ?score .\n"
                         "  }\n"
                         "  FILTER (?score > 0.5)\n"
                         "}\n";
        queries["Q5a"] = oma_prefix + "PREFIX fx: <" + vocab::app + ">\n" +
                         "CONSTRUCT { ?g fx:orthologLabel ?label } WHERE {\n"
                         "  SERVICE <" + oma_url() + "> {\n"
                         "    ?g oma:orthologousTo ?h .\n"
                         "    ?h oma:label ?label .\n"
                         "  }\n"
                         "}\n";
        auto labels = q6_labels();
        queries["Q6a"] = oma_prefix +
                         "SELECT ?g ?species WHERE {\n"
                         "  VALUES ?label { \"" + labels[0] + "\" \"" + labels[1] + "\" }\n"
                         "  SERVICE <" + oma_url() + "> {\n"
                         "    ?g oma:label ?label .\n"
                         "    ?g oma:species ?species .\n"
                         "  }\n"
                         "}\n";
        queries["Q7a"] = oma_prefix +
                         "SELECT ?g WHERE {\n"
                         "  SERVICE <" + oma_url() + "> { ?g oma:label \"OMT2\" . }\n"
                         "  OPTIONAL {\n"
                         "    SERVICE SILENT <" + opt_.dead_endpoint + "> {\n"
                         "      ?g <http://fixture.fedql.dev/vocab/none#p> ?x .\n"
                         "    }\n"
                         "  }\n"
                         "}\n";
        queries["Q8a"] = oma_prefix + sv_prefix +
                         "SELECT ?partner ?score WHERE {\n"
                         "  SERVICE <" + oma_url() + "> {\n"
                         "    ?g oma:label \"OMT2\" .\n"
                         "    ?g oma:species \"" + vocab::wheat + "\" .\n"
                         "    ?g oma:orthologousTo ?og .\n"
                         "    ?og oma:species \"" + vocab::rice + "\" .\n"
                         "    ?og oma:xrefProtein ?pid .\n"
                         "  }\n"
                         "  SERVICE <" + string_special + "> {\n"
                         "    ?i sv:proteinA ?pid .\n"
                         "    ?i sv:proteinB ?partner .\n"
                         "    ?i sv:score ?score .\n"
                         "  }\n"
                         "}\n";
        for (const auto& [name, text] : queries)
            detail::write_file(opt_.out_dir / "queries" / (name + ".rq"), text);
    }

    void write_expected() {
        nlohmann::json doc;
        for (const auto& [name, r] : fx_.expected) {
            nlohmann::json e;
            e["kind"] = r.kind;
            e["count"] = r.count;
            if (r.kind == "select") e["results"] = nlohmann::json::parse(r.results_json);
            if (r.kind == "construct") e["ntriples"] = r.ntriples;
            doc[name] = std::move(e);
        }
        detail::write_file(opt_.out_dir / "expected.json", doc.dump(2) + "\n");
    }

    void write_deploy_config() {
        std::string mock_base = "http://" + opt_.host + ":" + std::to_string(opt_.mock_port);
        nlohmann::json doc;
        doc["mock_apis"] = nlohmann::json::array();
        doc["mock_apis"].push_back(
            {{"name", "string-api"}, {"port", opt_.mock_port}, {"fixtures", "api"}});
        nlohmann::json services = nlohmann::json::array();
        nlohmann::json svc;
        svc["name"] = "string-network";
        svc["route"] = "string-network";
        svc["api_url_template"] =
            mock_base + "/api/network?identifiers={identifiers}&species={species}";
        svc["method"] = "GET";
        svc["params"] = {{{"name", "identifiers"}, {"required", true}},
                         {{"name", "species"}, {"required", true}}};
        svc["mapping"] = "mappings/string-network";
        svc["timeout_ms"] = 10000;
        svc["cache_ttl_s"] = 0;
        services.push_back(svc);
        // the same API function, parameterized for rice: its own data source
        svc["name"] = "string-network-rice";
        svc["route"] = "string-network-rice";
        svc["params"] = {{{"name", "identifiers"}, {"required", true}},
                         {{"name", "species"}, {"required", false}, {"default", vocab::rice}}};
        services.push_back(svc);
        doc["endpoints"]["port"] = opt_.endpoints_port;
        doc["endpoints"]["services"] = std::move(services);
        doc["endpoints"]["graphs"] =
            nlohmann::json::array({{{"route", "oma"}, {"file", "oma.nt"}}});
        doc["federator"] = {{"port", opt_.federator_port},
                            {"chunk_size", 50},
                            {"timeout_ms", 10000},
                            {"max_remote_calls", 1000}};
        detail::write_file(opt_.out_dir / "deploy.json", doc.dump(2) + "\n");
    }

    void write_bench_config() {
        nlohmann::json doc;
        doc["federator"] =
            "http://" + opt_.host + ":" + std::to_string(opt_.federator_port) + "/federate/sparql";
        doc["expected"] = "expected.json";
        doc["hits_url"] = "http://" + opt_.host + ":" + std::to_string(opt_.mock_port) + "/_hits";
        doc["queries"] = nlohmann::json::array();
        for (const char* name : {"Q1a", "Q2a", "Q3a", "Q4a", "Q5a", "Q6a", "Q7a", "Q8a"})
            doc["queries"].push_back(
                {{"name", name}, {"file", std::string("queries/") + name + ".rq"}});
        detail::write_file(opt_.out_dir / "bench.json", doc.dump(2) + "\n");
    }

    GenOptions opt_;
    FixtureSet fx_;
};

inline FixtureSet gen_fixtures(const GenOptions& opt) { return FixtureGenerator(opt).run(); }

} // namespace fedql::bench
