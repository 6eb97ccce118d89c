#include <catch2/catch_amalgamated.hpp>

#include <mutex>

#include "fedql/fed/federator.hpp"
#include "fedql/sparql/parser.hpp"

#include "support/oracle.hpp"

using namespace fedql;
using namespace fedql::fed;
using namespace fedql::sparql;
using fedql::rdf::Graph;
using fedql::rdf::Term;

namespace {

/// RemoteClient backed by an in-memory graph per endpoint: parses the
/// incoming query, evaluates it locally, answers results JSON. Thread-safe.
struct FakeRemote {
    std::map<std::string, Graph> graphs;
    mutable std::mutex mutex;
    mutable std::vector<std::pair<std::string, std::string>> calls; // endpoint, query

    RemoteClient client() {
        return [this](const std::string& endpoint, const std::string& query) -> std::string {
            {
                std::lock_guard lock(mutex);
                calls.emplace_back(endpoint, query);
            }
            auto it = graphs.find(util::strip_query(endpoint));
            if (it == graphs.end()) throw RemoteError(endpoint, "connection refused");
            auto ast = parse_query(query);
            auto rows = eval_select(it->second, ast, failing_service_executor());
            return serialize_select_results(rows);
        };
    }

    size_t call_count() const {
        std::lock_guard lock(mutex);
        return calls.size();
    }
};

Graph numbers_graph(int n) {
    Graph g;
    for (int i = 0; i < n; ++i)
        g.insert({Term::iri("http://d/item" + std::to_string(i)), Term::iri("http://d/value"),
                  Term::integer(i)});
    return g;
}

} // namespace

TEST_CASE("plan: textual order, dataless warning, allowlist") {
    FederationConfig cfg;
    auto ast = parse_query(
        "SELECT * WHERE { SERVICE <http://one/sparql> { ?a ?b ?c } SERVICE <http://two/sparql> "
        "{ ?d ?e ?f } }");
    auto p = plan(ast, cfg);
    CHECK(p.service_endpoints ==
          std::vector<std::string>{"http://one/sparql", "http://two/sparql"});
    CHECK(p.warnings.empty());

    auto local = parse_query("SELECT * WHERE { ?s ?p ?o SERVICE <http://one/sparql> { ?a ?b ?c } }");
    auto p2 = plan(local, cfg);
    REQUIRE(p2.warnings.size() == 1);
    CHECK(p2.warnings[0].find("stores no data") != std::string::npos);

    FederationConfig restricted;
    restricted.allow = {"http://one/sparql"};
    CHECK_THROWS_AS(plan(ast, restricted), EndpointNotAllowed);
    // allowlist matches the endpoint base with the query string stripped
    auto with_args = parse_query(
        "SELECT * WHERE { SERVICE <http://one/sparql?identifiers=X&species=4530> { ?a ?b ?c } }");
    CHECK_NOTHROW(plan(with_args, restricted));
}

TEST_CASE("plan failures happen before any network i/o") {
    FakeRemote remote;
    FederationConfig cfg;
    cfg.allow = {"http://allowed/sparql"};
    auto ast = parse_query("SELECT * WHERE { SERVICE <http://forbidden/sparql> { ?s ?p ?o } }");
    CHECK_THROWS_AS(eval_federated(ast, cfg, remote.client()), EndpointNotAllowed);
    CHECK(remote.call_count() == 0);
}

TEST_CASE("execute_service: unseeded body goes out without VALUES") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(3);
    FederationConfig cfg;
    QueryRuntime runtime;

    auto ast = parse_query("SELECT * WHERE { SERVICE <http://d/sparql> { ?s <http://d/value> ?v } }");
    const auto& body = ast.where.elements[0].body.front();

    SolutionSequence incoming;
    incoming.rows.emplace_back(); // the single empty row
    auto out = execute_service("http://d/sparql", body, incoming, cfg, remote.client(), runtime);
    CHECK(out.rows.size() == 3);
    REQUIRE(remote.call_count() == 1);
    CHECK(remote.calls[0].second.find("VALUES") == std::string::npos);
    CHECK(runtime.remote_calls.load() == 1);
}

TEST_CASE("execute_service: bound join chunks the distinct projections") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(200);
    FederationConfig cfg;
    cfg.chunk_size = 50;
    QueryRuntime runtime;

    auto ast = parse_query("SELECT * WHERE { SERVICE <http://d/sparql> { ?s <http://d/value> ?v } }");
    const auto& body = ast.where.elements[0].body.front();

    SolutionSequence incoming;
    incoming.vars = {"s"};
    for (int i = 0; i < 120; ++i)
        incoming.rows.push_back({{"s", Term::iri("http://d/item" + std::to_string(i))}});

    auto out = execute_service("http://d/sparql", body, incoming, cfg, remote.client(), runtime);
    CHECK(out.rows.size() == 120);
    CHECK(remote.call_count() == 3); // ceil(120/50)
    for (const auto& [ep, q] : remote.calls) CHECK(q.find("VALUES (?s)") != std::string::npos);

    // global dedup: 120 rows projecting onto 40 distinct values need 1 call
    FakeRemote remote2;
    remote2.graphs["http://d/sparql"] = numbers_graph(200);
    QueryRuntime runtime2;
    SolutionSequence dup;
    dup.vars = {"s", "tag"};
    for (int i = 0; i < 120; ++i)
        dup.rows.push_back({{"s", Term::iri("http://d/item" + std::to_string(i % 40))},
                            {"tag", Term::integer(i)}});
    auto out2 = execute_service("http://d/sparql", body, dup, cfg, remote2.client(), runtime2);
    CHECK(out2.rows.size() == 120);
    CHECK(remote2.call_count() == 1);
}

TEST_CASE("execute_service: unbound join variables travel as UNDEF") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(5);
    FederationConfig cfg;
    QueryRuntime runtime;
    auto ast = parse_query("SELECT * WHERE { SERVICE <http://d/sparql> { ?s <http://d/value> ?v } }");
    const auto& body = ast.where.elements[0].body.front();

    SolutionSequence incoming;
    incoming.vars = {"s"};
    incoming.rows.push_back({{"s", Term::iri("http://d/item1")}});
    incoming.rows.push_back({}); // unbound ?s: matches everything remotely

    auto out = execute_service("http://d/sparql", body, incoming, cfg, remote.client(), runtime);
    CHECK(remote.calls.at(0).second.find("UNDEF") != std::string::npos);
    // the UNDEF projection overlaps the bound one remotely, so the shipped
    // VALUES block yields the item1 solution twice; join-back keeps the
    // multiplicities the definition produces: the bound row merges with both
    // copies (2), the unbound row merges with all six remote rows
    CHECK(out.rows.size() == 2 + 6);
    // soundness: every row is a compatible merge of an incoming row
    for (const auto& row : out.rows) {
        auto it = row.find("s");
        REQUIRE(it != row.end());
        CHECK(row.count("v") == 1);
    }
}

TEST_CASE("execute_service: budget enforcement") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(10);
    FederationConfig cfg;
    cfg.chunk_size = 1;
    cfg.max_remote_calls = 2;
    QueryRuntime runtime;
    auto ast = parse_query("SELECT * WHERE { SERVICE <http://d/sparql> { ?s <http://d/value> ?v } }");
    const auto& body = ast.where.elements[0].body.front();

    SolutionSequence incoming;
    incoming.vars = {"s"};
    for (int i = 0; i < 5; ++i)
        incoming.rows.push_back({{"s", Term::iri("http://d/item" + std::to_string(i))}});
    CHECK_THROWS_AS(execute_service("http://d/sparql", body, incoming, cfg, remote.client(), runtime),
                    QueryBudgetExceeded);
}

TEST_CASE("eval_federated: two-service join with shared variables") {
    FakeRemote remote;
    Graph left;
    left.insert({Term::iri("http://g/gene1"), Term::iri("http://g/xref"), Term::literal("P1")});
    left.insert({Term::iri("http://g/gene2"), Term::iri("http://g/xref"), Term::literal("P2")});
    Graph right;
    right.insert({Term::blank("e1"), Term::iri("http://s/proteinA"), Term::literal("P1")});
    right.insert({Term::blank("e1"), Term::iri("http://s/proteinB"), Term::literal("X9")});
    remote.graphs["http://left/sparql"] = left;
    remote.graphs["http://right/sparql"] = right;

    auto ast = parse_query(
        "SELECT ?g ?partner WHERE {\n"
        "  SERVICE <http://left/sparql> { ?g <http://g/xref> ?pid }\n"
        "  SERVICE <http://right/sparql> { ?i <http://s/proteinA> ?pid . ?i <http://s/proteinB> "
        "?partner }\n"
        "}");
    FederationConfig cfg;
    auto result = eval_federated(ast, cfg, remote.client());
    REQUIRE(result.solutions);
    REQUIRE(result.solutions->rows.size() == 1);
    CHECK(result.solutions->rows[0].at("g") == Term::iri("http://g/gene1"));
    CHECK(result.solutions->rows[0].at("partner") == Term::literal("X9"));
    CHECK(result.remote_calls == 2);
}

TEST_CASE("eval_federated: SILENT failure keeps the incoming rows") {
    FakeRemote remote;
    Graph left;
    left.insert({Term::iri("http://g/gene1"), Term::iri("http://g/xref"), Term::literal("P1")});
    remote.graphs["http://left/sparql"] = left;
    // http://dead/sparql has no graph: the fake client refuses the connection

    auto silent = parse_query(
        "SELECT * WHERE { SERVICE <http://left/sparql> { ?g <http://g/xref> ?pid } "
        "SERVICE SILENT <http://dead/sparql> { ?g <http://x/p> ?z } }");
    FederationConfig cfg;
    auto result = eval_federated(silent, cfg, remote.client());
    REQUIRE(result.solutions);
    CHECK(result.solutions->rows.size() == 1);
    CHECK_FALSE(result.solutions->rows[0].count("z"));

    auto loud = parse_query(
        "SELECT * WHERE { SERVICE <http://left/sparql> { ?g <http://g/xref> ?pid } "
        "SERVICE <http://dead/sparql> { ?g <http://x/p> ?z } }");
    CHECK_THROWS_AS(eval_federated(loud, cfg, remote.client()), RemoteError);
}

TEST_CASE("eval_federated: blank nodes never join across responses") {
    // both services answer with a bnode labelled b0 for the shared variable
    RemoteClient client = [](const std::string&, const std::string&) -> std::string {
        SolutionSequence s;
        s.vars = {"x"};
        s.rows.push_back({{"x", Term::blank("b0")}});
        return serialize_select_results(s);
    };
    auto ast = parse_query(
        "SELECT * WHERE { SERVICE <http://a/sparql> { ?x <http://p/a> ?y1 } "
        "SERVICE <http://b/sparql> { ?x <http://p/b> ?y2 } }");
    FederationConfig cfg;
    auto result = eval_federated(ast, cfg, client);
    REQUIRE(result.solutions);
    CHECK(result.solutions->rows.empty());
}

TEST_CASE("eval_federated: local triples match nothing, with a warning") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(2);
    auto ast = parse_query(
        "SELECT * WHERE { ?s ?p ?o SERVICE <http://d/sparql> { ?a <http://d/value> ?v } }");
    FederationConfig cfg;
    auto result = eval_federated(ast, cfg, remote.client());
    REQUIRE(result.solutions);
    CHECK(result.solutions->rows.empty()); // the dataless federator kills the row stream
    CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("eval_federated: CONSTRUCT assembles remote rows into a graph") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(4);
    auto ast = parse_query(
        "CONSTRUCT { ?s <http://out/v> ?v . } WHERE { SERVICE <http://d/sparql> { ?s "
        "<http://d/value> ?v } }");
    FederationConfig cfg;
    auto result = eval_federated(ast, cfg, remote.client());
    REQUIRE(result.graph);
    CHECK(result.graph->size() == 4);
}

TEST_CASE("chunk size never changes the result multiset") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(30);
    auto ast = parse_query(
        "SELECT * WHERE { VALUES (?s) { (<http://d/item0>) (<http://d/item3>) (<http://d/item7>) "
        "(<http://d/item9>) (<http://d/item11>) (<http://d/item25>) } "
        "SERVICE <http://d/sparql> { ?s <http://d/value> ?v } }");
    std::vector<SolutionSequence> results;
    for (int chunk : {1, 7, 50}) {
        FederationConfig cfg;
        cfg.chunk_size = chunk;
        auto r = eval_federated(ast, cfg, remote.client());
        REQUIRE(r.solutions);
        results.push_back(*r.solutions);
    }
    CHECK(oracle::multiset_equal(results[0].rows, results[1].rows));
    CHECK(oracle::multiset_equal(results[0].rows, results[2].rows));
    CHECK(results[0].rows.size() == 6);
}

TEST_CASE("federator HTTP surface") {
    FakeRemote remote;
    remote.graphs["http://d/sparql"] = numbers_graph(3);
    FederationConfig cfg;
    std::vector<std::string> log_lines;
    Federator fed(cfg, remote.client(),
                  [&](const std::string& line) { log_lines.push_back(line); });
    service::ServerHandle server;
    fed.mount(server.server());
    server.start();
    httplib::Client client(server.base_url());

    auto ok = client.Post("/federate/sparql",
                          "SELECT * WHERE { SERVICE <http://d/sparql> { ?s <http://d/value> ?v } }",
                          service::kSparqlQuery);
    REQUIRE(ok);
    CHECK(ok->status == 200);
    CHECK(sparql::parse_select_results(ok->body).rows.size() == 3);
    CHECK(ok->get_header_value("X-Fedql-Remote-Calls") == "1");

    auto bad = client.Post("/federate/sparql", "SELECT ?x WHERE { ?x <p> }", service::kSparqlQuery);
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(nlohmann::json::parse(bad->body)["detail"].get<std::string>().find("1:") !=
          std::string::npos);

    auto down = client.Post("/federate/sparql",
                            "SELECT * WHERE { SERVICE <http://dead/sparql> { ?s ?p ?o } }",
                            service::kSparqlQuery);
    REQUIRE(down);
    CHECK(down->status == 502);
    CHECK(nlohmann::json::parse(down->body)["endpoint"] == "http://dead/sparql");

    REQUIRE(log_lines.size() == 3);
    CHECK(nlohmann::json::parse(log_lines[0])["remote_calls"] == 1);
}
