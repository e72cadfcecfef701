#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <catch_amalgamated.hpp>

#include <storynet/storynet.hpp>

using namespace storynet;
using words = std::vector<std::string>;

namespace {

const char* feynman = "To those who do not know mathematics it is difficult to get across a real feeling as to the "
                      "beauty, the deepest beauty, of nature...";

bool has_punctuation(const std::string& w) {
    const auto u = icu::UnicodeString::fromUTF8(w);
    for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1))
        if (u_ispunct(u.char32At(i)) || u_isUWhiteSpace(u.char32At(i)))
            return true;
    return false;
}

} // namespace

TEST_CASE("tokenize drops punctuation and folds case") {
    CHECK(tokenize("the beauty, the deepest beauty, of nature") ==
          words{"the", "beauty", "the", "deepest", "beauty", "of", "nature"});
    CHECK(tokenize("A a A.") == words{"a", "a", "a"});
    CHECK(tokenize("").empty());
    CHECK(tokenize(" ,.;!? -- ").empty());
}

TEST_CASE("possessive s is excluded") {
    CHECK(tokenize("the dog's bone") == words{"the", "dog", "bone"});
    CHECK(tokenize("the dog’s bone") == words{"the", "dog", "bone"});
    CHECK(tokenize("James's hat") == words{"james", "hat"});
    // an s that is not glued to a preceding word stays
    CHECK(tokenize("plural 's' alone") == words{"plural", "s", "alone"});
    CHECK(tokenize("s is a letter") == words{"s", "is", "a", "letter"});
}

TEST_CASE("contractions split into two words") {
    CHECK(tokenize("don't stop") == words{"don", "t", "stop"});
    CHECK(tokenize("we'll see") == words{"we", "ll", "see"});
    CHECK(tokenize("I’m here") == words{"i", "m", "here"});
}

TEST_CASE("hyphens and digits") {
    CHECK(tokenize("well-known facts") == words{"well", "known", "facts"});
    CHECK(tokenize("in 1969, 3.5 million") == words{"in", "1969", "3", "5", "million"});
}

TEST_CASE("unicode words") {
    CHECK(tokenize("Café NAÏVE") == words{"café", "naïve"});
    // decomposed e + combining acute composes to the same word
    CHECK(tokenize("Café") == words{"café"});
    CHECK(tokenize("STRASSE Straße") == words{"strasse", "strasse"});
}

TEST_CASE("tokenize is pure and ignores extra punctuation") {
    const std::string text = "Call me Ishmael. Some years ago - never mind how long precisely...";
    CHECK(tokenize(text) == tokenize(text));
    CHECK(tokenize("a, b") == tokenize("a b"));

    std::mt19937_64 rng(11);
    const std::string punct = ",.;:!?()\"-";
    const words base = tokenize(feynman);
    for (int trial = 0; trial < 50; ++trial) {
        std::string noisy;
        for (char c : std::string(feynman)) {
            noisy += c;
            if (c == ' ' && rng() % 2)
                noisy += punct[rng() % punct.size()];
        }
        CHECK(tokenize(noisy) == base);
    }
}

TEST_CASE("no token carries punctuation or whitespace") {
    const auto path = std::filesystem::path(STORYNET_SOURCE_DIR) / "data/minicorpus/fiction";
    std::size_t checked = 0;
    for (const auto& f : std::filesystem::directory_iterator(path)) {
        for (const auto& w : tokenize(read_text(f.path()))) {
            REQUIRE_FALSE(w.empty());
            REQUIRE_FALSE(has_punctuation(w));
            ++checked;
        }
        if (checked > 20000)
            break;
    }
    CHECK(checked > 0);
}

TEST_CASE("lemmatizer groups lexical forms") {
    CHECK(lemmatize("eats") == "eat");
    CHECK(lemmatize("eaten") == "eat");
    CHECK(lemmatize("eat") == "eat");
    CHECK(lemmatize("running") == lemmatize("runs"));
    CHECK(lemmatize("runs") == lemmatize("run"));
    CHECK(lemmatize("was") == lemmatize("is"));
    CHECK(lemmatize("children") == lemmatize("child"));
    CHECK(lemmatize("running", lemmatizer_kind::identity) == "running");
}

TEST_CASE("lemmatizer is idempotent") {
    const auto path = std::filesystem::path(STORYNET_SOURCE_DIR) / "tests/data/porter_golden.tsv";
    std::ifstream in(path);
    REQUIRE(in);
    const lemmatizer lem;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        const auto word = line.substr(0, line.find('\t'));
        const auto once = lem(word);
        REQUIRE_FALSE(once.empty());
        CHECK(lem(once) == once);
        ++n;
    }
    CHECK(n > 1000);
}

TEST_CASE("Porter stemmer matches an independent reference") {
    const auto path = std::filesystem::path(STORYNET_SOURCE_DIR) / "tests/data/porter_golden.tsv";
    std::ifstream in(path);
    REQUIRE(in);
    std::string line;
    std::size_t n = 0, mismatches = 0;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        const auto word = line.substr(0, tab);
        const auto want = line.substr(tab + 1);
        const auto got = porter::stem(word);
        if (got != want) {
            ++mismatches;
            UNSCOPED_INFO(word << ": got " << got << ", want " << want);
        }
        ++n;
    }
    CHECK(n > 1000);
    CHECK(mismatches == 0);
}

TEST_CASE("Porter stemmer leaves non lowercase ascii alone") {
    CHECK(porter::stem("1969") == "1969");
    CHECK(porter::stem("cafés") == "cafés");
    CHECK(porter::stem("is") == "is");
}

TEST_CASE("make_stream") {
    const auto s = make_stream(feynman, "feynman", lemmatizer(lemmatizer_kind::identity));
    CHECK(s.n_words() == 25);
    CHECK(s.n_unique_lemmas() == 21);
    CHECK(s.source_id == "feynman");
    for (std::size_t i = 0; i < s.tokens.size(); ++i)
        CHECK(s.tokens[i].position == i);

    const auto empty = make_stream("", "e");
    CHECK(empty.n_words() == 0);
    CHECK(empty.empty());

    const auto a = make_stream("A a A.", "a");
    REQUIRE(a.n_words() == 3);
    for (const auto& t : a.tokens)
        CHECK(t.lemma == "a");

    const auto stemmed = make_stream(feynman, "feynman");
    CHECK(stemmed.n_words() == 25);
    CHECK(stemmed.n_unique_lemmas() <= stemmed.n_words());
}

TEST_CASE("lemmatizer names") {
    CHECK(parse_lemmatizer("stemmer") == lemmatizer_kind::stemmer);
    CHECK(parse_lemmatizer("identity") == lemmatizer_kind::identity);
    CHECK(to_string(lemmatizer_kind::stemmer) == "stemmer");
    CHECK_THROWS_AS(parse_lemmatizer("snowball"), usage_error);
}
