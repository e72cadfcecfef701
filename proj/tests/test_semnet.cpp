#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <catch_amalgamated.hpp>

#include <storynet/storynet.hpp>

using namespace storynet;

namespace {

const char* feynman = "To those who do not know mathematics it is difficult to get across a real feeling as to the "
                      "beauty, the deepest beauty, of nature...";

token_stream stream_of(std::initializer_list<const char*> lemmas) {
    token_stream s;
    std::size_t i = 0;
    for (const char* l : lemmas)
        s.tokens.push_back({l, l, i++});
    return s;
}

using pair_set = std::set<std::pair<std::string, std::string>>;

// Every position pair within distance m, checked independently of the builder.
pair_set brute_force_edges(const token_stream& s, unsigned m) {
    pair_set out;
    for (std::size_t p = 0; p < s.tokens.size(); ++p)
        for (std::size_t q = 0; q < s.tokens.size(); ++q) {
            const auto gap = p > q ? p - q : q - p;
            const auto& a = s.tokens[p].lemma;
            const auto& b = s.tokens[q].lemma;
            if (gap >= 1 && gap <= m && a != b)
                out.insert({std::min(a, b), std::max(a, b)});
        }
    return out;
}

pair_set edges_of(const semantic_network& net) {
    const auto list = edge_list(net);
    return {list.begin(), list.end()};
}

token_stream random_stream(std::mt19937_64& rng, std::size_t len, std::size_t alphabet) {
    token_stream s;
    for (std::size_t i = 0; i < len; ++i) {
        const auto w = "w" + std::to_string(rng() % alphabet);
        s.tokens.push_back({w, w, i});
    }
    return s;
}

} // namespace

TEST_CASE("Feynman quote at m=2") {
    const auto stream = make_stream(feynman, "feynman", lemmatizer(lemmatizer_kind::identity));
    const auto net = build_network(stream, 2);
    CHECK(net.n_vertices() == 21);
    CHECK(net.n_words() == 25);

    const auto beauty = net.find("beauty");
    REQUIRE(beauty);
    CHECK(net.degree(*beauty) == 5);
    std::set<std::string> nbrs;
    for (auto v : net.neighbors(*beauty))
        nbrs.insert(net.label(v));
    CHECK(nbrs == std::set<std::string>{"to", "the", "deepest", "of", "nature"});

    CHECK(net.edge_count() == brute_force_edges(stream, 2).size());
    CHECK(edges_of(net) == brute_force_edges(stream, 2));
}

TEST_CASE("Feynman edge list matches the golden file") {
    const auto stream = make_stream(feynman, "feynman", lemmatizer(lemmatizer_kind::identity));
    std::ostringstream got;
    write_edge_list(got, build_network(stream, 2));
    std::ifstream in(std::filesystem::path(STORYNET_SOURCE_DIR) / "tests/data/feynman_m2_identity.tsv");
    REQUIRE(in);
    std::stringstream want;
    want << in.rdbuf();
    CHECK(got.str() == want.str());
}

TEST_CASE("small streams") {
    SECTION("a b a at m=1") {
        const auto net = build_network(stream_of({"a", "b", "a"}), 1);
        CHECK(net.n_vertices() == 2);
        CHECK(net.edge_count() == 1);
        CHECK(net.has_edge(0, 1));
        CHECK_FALSE(net.has_edge(0, 0));
    }
    SECTION("chain") {
        CHECK(edge_count(build_network(stream_of({"a", "b", "c"}), 1)) == 2);
    }
    SECTION("triangle") {
        CHECK(edge_count(build_network(stream_of({"a", "b", "c"}), 2)) == 3);
    }
    SECTION("stream shorter than the window gives a complete graph") {
        const auto net = build_network(stream_of({"a", "b", "c", "d"}), 10);
        CHECK(net.edge_count() == 6);
    }
    SECTION("single word") {
        const auto net = build_network(stream_of({"a"}), 1);
        CHECK(net.n_vertices() == 1);
        CHECK(net.edge_count() == 0);
    }
}

TEST_CASE("vertices follow first occurrence") {
    const auto net = build_network(stream_of({"c", "a", "c", "b", "a"}), 1);
    CHECK(net.label(0) == "c");
    CHECK(net.label(1) == "a");
    CHECK(net.label(2) == "b");
    CHECK(*net.find("b") == 2);
    CHECK_FALSE(net.find("z"));
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(build_network(stream_of({"a", "b"}), 0), usage_error);
    CHECK_THROWS_AS(build_network(token_stream{}, 2), data_error);
}

TEST_CASE("builder equals brute force on random streams") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto len = 1 + rng() % 50;
        const auto alphabet = 1 + rng() % 20;
        const unsigned m = 1 + static_cast<unsigned>(rng() % 6);
        const auto s = random_stream(rng, len, alphabet);
        const auto net = build_network(s, m);
        REQUIRE(edges_of(net) == brute_force_edges(s, m));
        CHECK(net.n_vertices() == s.n_unique_lemmas());
    }
}

TEST_CASE("structural invariants") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_stream(rng, 2 + rng() % 200, 2 + rng() % 40);
        const unsigned m = 1 + static_cast<unsigned>(rng() % 5);
        const auto net = build_network(s, m);
        const auto next = build_network(s, m + 1);

        std::size_t degree_sum = 0;
        std::map<std::string, std::size_t> occurrences;
        for (const auto& t : s.tokens)
            ++occurrences[t.lemma];
        for (vertex_id v = 0; v < net.vertex_count(); ++v) {
            degree_sum += net.degree(v);
            CHECK_FALSE(net.has_edge(v, v));
            for (auto u : net.neighbors(v))
                CHECK(net.has_edge(u, v));
            CHECK(net.degree(v) <= 2 * m * occurrences[net.label(v)]);
        }
        CHECK(degree_sum == 2 * net.edge_count());
        CHECK(net.n_vertices() <= net.n_words());
        CHECK(mean_geodesic(net).connected);

        const auto wider = edges_of(next);
        for (const auto& e : edges_of(net))
            CHECK(wider.count(e) == 1);
    }
}

TEST_CASE("adjacency_graph ignores loops and repeats") {
    const std::vector<std::pair<vertex_id, vertex_id>> edges{{0, 1}, {1, 0}, {1, 1}, {2, 1}, {0, 1}};
    const auto g = adjacency_graph::from_edges(3, edges);
    CHECK(g.edge_count() == 2);
    CHECK(g.degree(1) == 2);
    const std::vector<std::pair<vertex_id, vertex_id>> bad{{0, 3}};
    CHECK_THROWS_AS(adjacency_graph::from_edges(3, bad), usage_error);
}
