#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "error.hpp"
#include "porter.hpp"

namespace storynet {

struct token {
    std::string surface;
    std::string lemma;
    std::size_t position = 0;

    bool operator==(const token&) const = default;
};

struct token_stream {
    std::vector<token> tokens;
    std::string source_id;

    std::size_t n_words() const noexcept { return tokens.size(); }
    bool empty() const noexcept { return tokens.empty(); }
    std::size_t n_unique_lemmas() const;
};

namespace detail {

inline const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr)
        throw std::runtime_error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(status));
    return *n;
}

inline icu::UnicodeString normalize_nfc(const icu::UnicodeString& s) {
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString out = nfc().normalize(s, status);
    if (U_FAILURE(status))
        throw data_error(std::string("NFC normalization failed: ") + u_errorName(status));
    return out;
}

inline bool is_word_start(UChar32 c) { return u_isalpha(c) || u_isdigit(c); }

inline bool is_word_continue(UChar32 c) { return is_word_start(c) || (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }

inline bool is_apostrophe(UChar32 c) { return c == 0x0027 || c == 0x2019 || c == 0x02BC; }

inline std::string fold(const icu::UnicodeString& word) {
    icu::UnicodeString w(word);
    w.foldCase(U_FOLD_CASE_DEFAULT);
    std::string out;
    normalize_nfc(w).toUTF8String(out);
    return out;
}

} // namespace detail

/// Case-folded words of `text`. Words are maximal runs of letters and digits (combining marks extend a run);
/// everything else separates words. An "s" split off by an apostrophe directly after a word is dropped.
inline std::vector<std::string> tokenize(std::string_view text) {
    const icu::UnicodeString u = detail::normalize_nfc(
        icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))));

    std::vector<std::string> words;
    const int32_t len = u.length();
    int32_t i = 0;
    int32_t prev_end = -1; // index one past the previous word
    while (i < len) {
        const UChar32 c = u.char32At(i);
        if (!detail::is_word_start(c)) {
            i = u.moveIndex32(i, 1);
            continue;
        }
        const int32_t start = i;
        while (i < len && detail::is_word_continue(u.char32At(i)))
            i = u.moveIndex32(i, 1);
        std::string w = detail::fold(icu::UnicodeString(u, start, i - start));

        bool possessive = false;
        if (w == "s" && prev_end >= 0 && start > 0) {
            const int32_t apos = u.moveIndex32(start, -1);
            possessive = apos == prev_end && detail::is_apostrophe(u.char32At(apos));
        }
        if (!possessive)
            words.push_back(std::move(w));
        prev_end = i;
    }
    return words;
}

enum class lemmatizer_kind { stemmer, identity };

inline std::string_view to_string(lemmatizer_kind k) { return k == lemmatizer_kind::stemmer ? "stemmer" : "identity"; }

inline lemmatizer_kind parse_lemmatizer(std::string_view s) {
    if (s == "stemmer")
        return lemmatizer_kind::stemmer;
    if (s == "identity")
        return lemmatizer_kind::identity;
    throw usage_error("unknown lemmatizer \"" + std::string(s) + "\" (expected stemmer|identity)");
}

namespace detail {

inline const std::unordered_map<std::string_view, std::string_view>& irregular_forms() {
    static const std::unordered_map<std::string_view, std::string_view> table{
        {"am", "be"},          {"is", "be"},           {"are", "be"},        {"was", "be"},
        {"were", "be"},        {"been", "be"},         {"has", "have"},      {"had", "have"},
        {"does", "do"},        {"did", "do"},          {"done", "do"},       {"goes", "go"},
        {"went", "go"},        {"gone", "go"},         {"ate", "eat"},       {"eaten", "eat"},
        {"ran", "run"},        {"saw", "see"},         {"seen", "see"},      {"said", "say"},
        {"made", "make"},      {"took", "take"},       {"taken", "take"},    {"came", "come"},
        {"gave", "give"},      {"given", "give"},      {"knew", "know"},     {"known", "know"},
        {"thought", "think"},  {"got", "get"},         {"gotten", "get"},    {"found", "find"},
        {"told", "tell"},      {"became", "become"},   {"felt", "feel"},     {"brought", "bring"},
        {"began", "begin"},    {"begun", "begin"},     {"kept", "keep"},     {"held", "hold"},
        {"wrote", "write"},    {"written", "write"},   {"stood", "stand"},   {"heard", "hear"},
        {"met", "meet"},       {"sat", "sit"},         {"spoke", "speak"},   {"spoken", "speak"},
        {"drove", "drive"},    {"driven", "drive"},    {"flew", "fly"},      {"flown", "fly"},
        {"fallen", "fall"},    {"broke", "break"},     {"broken", "break"},  {"chose", "choose"},
        {"chosen", "choose"},  {"drew", "draw"},       {"drawn", "draw"},    {"grew", "grow"},
        {"grown", "grow"},     {"threw", "throw"},     {"thrown", "throw"},  {"wore", "wear"},
        {"worn", "wear"},      {"sang", "sing"},       {"sung", "sing"},     {"swam", "swim"},
        {"swum", "swim"},      {"bought", "buy"},      {"caught", "catch"},  {"taught", "teach"},
        {"fought", "fight"},   {"sought", "seek"},     {"sold", "sell"},     {"sent", "send"},
        {"spent", "spend"},    {"built", "build"},     {"lost", "lose"},     {"paid", "pay"},
        {"led", "lead"},       {"slept", "sleep"},     {"won", "win"},       {"understood", "understand"},
        {"men", "man"},        {"women", "woman"},     {"children", "child"}, {"feet", "foot"},
        {"teeth", "tooth"},    {"mice", "mouse"},      {"geese", "goose"},   {"people", "person"},
    };
    return table;
}

} // namespace detail

/// Maps a case-folded word to its lemma. The stemmer applies an irregular-form table then Porter stripping,
/// repeated until nothing changes, so lemmatizing a lemma returns it unchanged.
class lemmatizer {
public:
    explicit lemmatizer(lemmatizer_kind kind = lemmatizer_kind::stemmer) : kind_(kind) {}

    lemmatizer_kind kind() const noexcept { return kind_; }

    std::string operator()(std::string_view word) const {
        if (kind_ == lemmatizer_kind::identity)
            return std::string(word);
        std::string cur(word);
        for (int round = 0; round < max_rounds; ++round) {
            std::string next = step(cur);
            if (next == cur)
                return cur;
            cur = std::move(next);
        }
        return cur;
    }

    static constexpr int max_rounds = 32;

private:
    lemmatizer_kind kind_;

    static std::string step(const std::string& w) {
        const auto& table = detail::irregular_forms();
        if (auto it = table.find(w); it != table.end())
            return porter::stem(it->second);
        return porter::stem(w);
    }
};

inline std::string lemmatize(std::string_view word, lemmatizer_kind kind = lemmatizer_kind::stemmer) {
    return lemmatizer(kind)(word);
}

inline token_stream make_stream(std::string_view text, std::string source_id,
                                const lemmatizer& lemma = lemmatizer(lemmatizer_kind::stemmer)) {
    token_stream out;
    out.source_id = std::move(source_id);
    auto words = tokenize(text);
    out.tokens.reserve(words.size());
    std::unordered_map<std::string, std::string> cache;
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto [it, fresh] = cache.try_emplace(words[i]);
        if (fresh)
            it->second = lemma(words[i]);
        out.tokens.push_back(token{std::move(words[i]), it->second, i});
    }
    return out;
}

inline std::size_t token_stream::n_unique_lemmas() const {
    std::unordered_map<std::string_view, int> seen;
    for (const auto& t : tokens)
        seen.try_emplace(t.lemma, 0);
    return seen.size();
}

} // namespace storynet
