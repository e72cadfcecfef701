#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace storynet {

struct manifest_entry {
    std::string id;
    std::filesystem::path path;
    std::string label;

    bool operator==(const manifest_entry&) const = default;
};

/// Labeled sample list. Entry order is the file order.
struct corpus_manifest {
    std::vector<manifest_entry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
    std::size_t count(std::string_view label) const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                      [&](const auto& e) { return e.label == label; }));
    }

    bool operator==(const corpus_manifest&) const = default;
};

using category_pair = std::array<std::string, 2>;

inline const category_pair default_categories{"novel", "news"};

/// Parses a line-oriented manifest. Relative paths resolve against the manifest's directory.
inline corpus_manifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir,
                                      const category_pair& categories = default_categories,
                                      bool check_paths = true) {
    corpus_manifest out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw data_error("manifest line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec.contains("path") || !rec.contains("label") ||
            !rec["id"].is_string() || !rec["path"].is_string() || !rec["label"].is_string())
            throw data_error("manifest line " + std::to_string(lineno) + ": expected string fields id, path, label");

        manifest_entry e{rec["id"].get<std::string>(), rec["path"].get<std::string>(), rec["label"].get<std::string>()};
        if (!seen.insert(e.id).second)
            throw data_error("duplicate id \"" + e.id + "\"");
        if (e.label != categories[0] && e.label != categories[1])
            throw data_error("unknown label \"" + e.label + "\" for id \"" + e.id + "\"");
        if (e.path.is_relative())
            e.path = base_dir / e.path;
        if (check_paths) {
            std::ifstream probe(e.path);
            if (!probe)
                throw data_error("unreadable path " + e.path.string() + " for id \"" + e.id + "\"");
        }
        out.entries.push_back(std::move(e));
    }
    return out;
}

inline corpus_manifest load_manifest(const std::filesystem::path& path,
                                     const category_pair& categories = default_categories) {
    std::ifstream in(path);
    if (!in)
        throw data_error("cannot open manifest " + path.string());
    return parse_manifest(in, path.parent_path(), categories);
}

inline void write_manifest(std::ostream& out, const corpus_manifest& manifest) {
    for (const auto& e : manifest.entries)
        out << nlohmann::json{{"id", e.id}, {"path", e.path.generic_string()}, {"label", e.label}}.dump() << '\n';
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

struct sample_window {
    std::string sample_id;
    std::size_t start_word = 0;
    std::size_t length_words = 1;
};

/// Contiguous slice of any sequence whose elements carry a `position` member; positions are renumbered from 0.
template <typename Stream>
Stream extract_window(const Stream& stream, const sample_window& window) {
    if (window.length_words < 1)
        throw usage_error("window length must be at least 1");
    const auto total = stream.tokens.size();
    if (window.start_word > total || window.length_words > total - window.start_word)
        throw data_error("window [" + std::to_string(window.start_word) + ", " +
                         std::to_string(window.start_word + window.length_words) + ") out of range for " +
                         std::to_string(total) + " words");
    Stream out = stream;
    out.tokens.assign(stream.tokens.begin() + static_cast<std::ptrdiff_t>(window.start_word),
                      stream.tokens.begin() + static_cast<std::ptrdiff_t>(window.start_word + window.length_words));
    for (std::size_t i = 0; i < out.tokens.size(); ++i)
        out.tokens[i].position = i;
    return out;
}

/// FNV-1a, used to derive per-sample seeds that do not depend on manifest order.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Uniform window start such that the window fits; throws if it cannot.
inline std::size_t random_window_start(std::string_view sample_id, std::size_t total, std::size_t length,
                                       std::uint64_t seed) {
    if (length > total)
        throw data_error("sample shorter than window (" + std::to_string(total) + " < " + std::to_string(length) +
                         " words)");
    std::mt19937_64 rng(seed ^ fnv1a(sample_id));
    std::uniform_int_distribution<std::size_t> pick(0, total - length);
    return pick(rng);
}

struct control_eval_split {
    corpus_manifest control;
    corpus_manifest eval;
};

/// Per-category random partition: floor(fraction * n) to control, rest to eval. Input order kept within each part.
inline control_eval_split split_control_eval(const corpus_manifest& manifest, double fraction, std::uint64_t seed,
                                             const category_pair& categories = default_categories) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw usage_error("control fraction must lie in (0, 1)");
    std::vector<bool> to_control(manifest.size(), false);
    std::mt19937_64 rng(seed);
    for (const auto& cat : categories) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < manifest.size(); ++i)
            if (manifest.entries[i].label == cat)
                idx.push_back(i);
        if (idx.size() < 2)
            throw data_error("category \"" + cat + "\" too small to split (" + std::to_string(idx.size()) +
                             " entries)");
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto n_control = static_cast<std::size_t>(fraction * static_cast<double>(idx.size()));
        for (std::size_t i = 0; i < n_control; ++i)
            to_control[idx[i]] = true;
    }
    control_eval_split out;
    for (std::size_t i = 0; i < manifest.size(); ++i)
        (to_control[i] ? out.control : out.eval).entries.push_back(manifest.entries[i]);
    return out;
}

} // namespace storynet
