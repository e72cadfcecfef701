#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>

#include <storynet/storynet.hpp>

using namespace storynet;
namespace fs = std::filesystem;

namespace {

corpus_manifest parse(const std::string& text) {
    std::istringstream in(text);
    return parse_manifest(in, "/base", default_categories, false);
}

token_stream numbered_stream(std::size_t n) {
    token_stream s;
    for (std::size_t i = 0; i < n; ++i)
        s.tokens.push_back({"w" + std::to_string(i), "w" + std::to_string(i), i});
    return s;
}

corpus_manifest balanced(std::size_t per_category) {
    corpus_manifest m;
    for (std::size_t i = 0; i < per_category; ++i) {
        m.entries.push_back({"n" + std::to_string(i), "n.txt", "novel"});
        m.entries.push_back({"s" + std::to_string(i), "s.txt", "news"});
    }
    return m;
}

std::set<std::string> ids(const corpus_manifest& m) {
    std::set<std::string> out;
    for (const auto& e : m.entries)
        out.insert(e.id);
    return out;
}

} // namespace

TEST_CASE("manifest with two labelled entries") {
    const auto m = parse(R"({"id": "a", "path": "x.txt", "label": "novel"}
{"id": "b", "path": "/abs/y.txt", "label": "news"}
)");
    REQUIRE(m.size() == 2);
    CHECK(m.entries[0].id == "a");
    CHECK(m.entries[0].path == fs::path("/base/x.txt"));
    CHECK(m.entries[1].path == fs::path("/abs/y.txt"));
    CHECK(m.count("novel") == 1);
    CHECK(m.count("news") == 1);
}

TEST_CASE("manifest errors") {
    SECTION("duplicate id") {
        CHECK_THROWS_WITH(parse(R"({"id": "a", "path": "x", "label": "novel"}
{"id": "a", "path": "y", "label": "news"})"),
                          Catch::Matchers::ContainsSubstring("duplicate id"));
    }
    SECTION("unknown label") {
        CHECK_THROWS_AS(parse(R"({"id": "a", "path": "x", "label": "poetry"})"), data_error);
    }
    SECTION("malformed line") {
        CHECK_THROWS_AS(parse("{not json"), data_error);
        CHECK_THROWS_AS(parse(R"({"id": "a", "label": "novel"})"), data_error);
    }
    SECTION("missing file") {
        CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.jsonl"), data_error);
    }
    SECTION("unreadable entry path") {
        std::istringstream in(R"({"id": "a", "path": "nope.txt", "label": "novel"})");
        CHECK_THROWS_WITH(parse_manifest(in, "/nonexistent"), Catch::Matchers::ContainsSubstring("unreadable"));
    }
}

TEST_CASE("empty manifest is valid") {
    CHECK(parse("").empty());
    CHECK(parse("\n  \n").empty());
}

TEST_CASE("manifest round trip") {
    const auto m = parse(R"({"id": "a", "path": "x.txt", "label": "novel"}
{"id": "b \"quoted\"", "path": "sub/y.txt", "label": "news"}
)");
    std::ostringstream out;
    write_manifest(out, m);
    std::istringstream in(out.str());
    CHECK(parse_manifest(in, "/elsewhere", default_categories, false) == m);
}

TEST_CASE("bundled manifest loads") {
    const auto m = load_manifest(fs::path(STORYNET_SOURCE_DIR) / "data/minicorpus/manifest.jsonl");
    CHECK(m.count("novel") >= 20);
    CHECK(m.count("news") >= 20);
}

TEST_CASE("extract_window") {
    SECTION("prefix slice") {
        const auto w = extract_window(numbered_stream(1000), {"s", 0, 500});
        CHECK(w.n_words() == 500);
    }
    SECTION("whole stream") {
        const auto s = numbered_stream(100);
        const auto w = extract_window(s, {"s", 0, 100});
        REQUIRE(w.n_words() == 100);
        for (std::size_t i = 0; i < 100; ++i) {
            CHECK(w.tokens[i].position == i);
            CHECK(w.tokens[i].lemma == s.tokens[i].lemma);
        }
    }
    SECTION("out of range") {
        CHECK_THROWS_AS(extract_window(numbered_stream(100), {"s", 50, 100}), data_error);
        CHECK_THROWS_AS(extract_window(numbered_stream(100), {"s", 101, 1}), data_error);
        CHECK_THROWS_AS(extract_window(numbered_stream(100), {"s", 0, 0}), usage_error);
    }
    SECTION("positions renumbered") {
        const auto w = extract_window(numbered_stream(10), {"s", 3, 4});
        REQUIRE(w.n_words() == 4);
        CHECK(w.tokens.front().lemma == "w3");
        CHECK(w.tokens.front().position == 0);
        CHECK(w.tokens.back().position == 3);
    }
}

TEST_CASE("adjacent windows reconstruct the source range") {
    const auto s = numbered_stream(97);
    for (std::size_t len : {1u, 7u, 20u}) {
        std::vector<std::string> joined;
        std::size_t start = 5;
        for (; start + len <= s.n_words(); start += len) {
            const auto w = extract_window(s, {"s", start, len});
            CHECK(w.n_words() == len);
            for (const auto& t : w.tokens)
                joined.push_back(t.lemma);
        }
        REQUIRE(joined.size() == start - 5);
        for (std::size_t i = 0; i < joined.size(); ++i)
            CHECK(joined[i] == s.tokens[5 + i].lemma);
    }
}

TEST_CASE("random window start") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto start = random_window_start("sample", 1000, 500, seed);
        CHECK(start <= 500);
        CHECK(random_window_start("sample", 1000, 500, seed) == start);
    }
    CHECK(random_window_start("x", 500, 500, 3) == 0);
    CHECK_THROWS_AS(random_window_start("x", 499, 500, 3), data_error);
}

TEST_CASE("split sizes") {
    const auto split = split_control_eval(balanced(400), 0.5, 7);
    CHECK(split.control.count("novel") == 200);
    CHECK(split.control.count("news") == 200);
    CHECK(split.eval.count("novel") == 200);
    CHECK(split.eval.count("news") == 200);

    const auto odd = split_control_eval(balanced(5), 0.5, 7);
    CHECK(odd.control.count("novel") == 2);
    CHECK(odd.eval.count("novel") == 3);
}

TEST_CASE("split is a deterministic partition for every seed") {
    const auto m = balanced(4);
    const auto all = ids(m);
    std::set<std::set<std::string>> distinct;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const auto split = split_control_eval(m, 0.5, seed);
        const auto c = ids(split.control);
        const auto e = ids(split.eval);
        std::set<std::string> both;
        std::set_intersection(c.begin(), c.end(), e.begin(), e.end(), std::inserter(both, both.end()));
        CHECK(both.empty());
        std::set<std::string> either = c;
        either.insert(e.begin(), e.end());
        CHECK(either == all);
        CHECK(split.control.count("novel") == 2);
        CHECK(split.control.count("news") == 2);
        CHECK(split_control_eval(m, 0.5, seed).control == split.control);
        distinct.insert(c);
    }
    // 6 x 6 possible control sets; 64 seeds should visit more than one
    CHECK(distinct.size() > 1);
}

TEST_CASE("split errors") {
    corpus_manifest tiny;
    tiny.entries = {{"a", "a", "novel"}, {"b", "b", "news"}, {"c", "c", "news"}};
    CHECK_THROWS_AS(split_control_eval(tiny, 0.5, 1), data_error);
    CHECK_THROWS_AS(split_control_eval(balanced(4), 0.0, 1), usage_error);
    CHECK_THROWS_AS(split_control_eval(balanced(4), 1.0, 1), usage_error);
}
