#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "tokenize.hpp"

namespace storynet {

using vertex_id = std::uint32_t;

/// Anything with a vertex count and sorted, duplicate-free neighbor lists.
template <typename G>
concept undirected_graph = requires(const G& g, vertex_id v) {
    { g.vertex_count() } -> std::convertible_to<std::size_t>;
    { g.neighbors(v) } -> std::convertible_to<std::span<const vertex_id>>;
};

/// Simple undirected graph without self loops or multi-edges.
class adjacency_graph {
public:
    adjacency_graph() = default;
    explicit adjacency_graph(std::size_t n) : adj_(n) {}

    /// Self loops and repeated pairs in `edges` are ignored.
    static adjacency_graph from_edges(std::size_t n, std::span<const std::pair<vertex_id, vertex_id>> edges) {
        adjacency_graph g(n);
        for (auto [a, b] : edges) {
            if (a >= n || b >= n)
                throw usage_error("edge endpoint out of range");
            if (a == b)
                continue;
            g.adj_[a].push_back(b);
            g.adj_[b].push_back(a);
        }
        g.finalize();
        return g;
    }

    std::size_t vertex_count() const noexcept { return adj_.size(); }
    std::span<const vertex_id> neighbors(vertex_id v) const { return adj_[v]; }
    std::size_t degree(vertex_id v) const { return adj_[v].size(); }

    bool has_edge(vertex_id a, vertex_id b) const {
        const auto& n = adj_[a];
        return std::binary_search(n.begin(), n.end(), b);
    }

    std::size_t edge_count() const noexcept {
        std::size_t twice = 0;
        for (const auto& n : adj_)
            twice += n.size();
        return twice / 2;
    }

private:
    std::vector<std::vector<vertex_id>> adj_;

    void finalize() {
        for (auto& n : adj_) {
            std::sort(n.begin(), n.end());
            n.erase(std::unique(n.begin(), n.end()), n.end());
        }
    }
};

static_assert(undirected_graph<adjacency_graph>);

/// Co-occurrence network of one token stream: one vertex per lemma in first-occurrence order.
class semantic_network {
public:
    std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }
    std::size_t n_vertices() const noexcept { return graph_.vertex_count(); }
    std::size_t n_words() const noexcept { return n_words_; }
    unsigned m() const noexcept { return m_; }

    std::span<const vertex_id> neighbors(vertex_id v) const { return graph_.neighbors(v); }
    std::size_t degree(vertex_id v) const { return graph_.degree(v); }
    bool has_edge(vertex_id a, vertex_id b) const { return graph_.has_edge(a, b); }
    std::size_t edge_count() const noexcept { return graph_.edge_count(); }

    const std::string& label(vertex_id v) const { return labels_[v]; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    std::optional<vertex_id> find(std::string_view lemma) const {
        if (auto it = index_.find(std::string(lemma)); it != index_.end())
            return it->second;
        return std::nullopt;
    }

    const adjacency_graph& graph() const noexcept { return graph_; }

    friend semantic_network build_network(const token_stream& stream, unsigned m);

private:
    adjacency_graph graph_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, vertex_id> index_;
    unsigned m_ = 1;
    std::size_t n_words_ = 0;
};

static_assert(undirected_graph<semantic_network>);

/// Links positions p, q with 1 <= |p - q| <= m whenever their lemmas differ.
inline semantic_network build_network(const token_stream& stream, unsigned m) {
    if (m < 1)
        throw usage_error("word distance m must be at least 1");
    if (stream.empty())
        throw data_error("empty stream");

    semantic_network net;
    net.m_ = m;
    net.n_words_ = stream.n_words();

    std::vector<vertex_id> ids;
    ids.reserve(stream.tokens.size());
    for (const auto& t : stream.tokens) {
        auto [it, fresh] = net.index_.try_emplace(t.lemma, static_cast<vertex_id>(net.labels_.size()));
        if (fresh)
            net.labels_.push_back(t.lemma);
        ids.push_back(it->second);
    }

    std::vector<std::pair<vertex_id, vertex_id>> edges;
    edges.reserve(ids.size() * m);
    for (std::size_t p = 0; p < ids.size(); ++p)
        for (std::size_t q = p + 1; q < ids.size() && q - p <= m; ++q)
            if (ids[p] != ids[q])
                edges.emplace_back(ids[p], ids[q]);
    net.graph_ = adjacency_graph::from_edges(net.labels_.size(), edges);
    return net;
}

/// Number of unordered vertex pairs that are linked.
template <undirected_graph G>
std::size_t edge_count(const G& g) {
    std::size_t twice = 0;
    for (vertex_id v = 0; v < g.vertex_count(); ++v)
        twice += g.neighbors(v).size();
    return twice / 2;
}

/// Lemma pairs (smaller first), sorted.
inline std::vector<std::pair<std::string, std::string>> edge_list(const semantic_network& net) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(net.edge_count());
    for (vertex_id v = 0; v < net.vertex_count(); ++v)
        for (vertex_id u : net.neighbors(v))
            if (v < u) {
                const auto& a = net.label(v);
                const auto& b = net.label(u);
                out.emplace_back(std::min(a, b), std::max(a, b));
            }
    std::sort(out.begin(), out.end());
    return out;
}

inline void write_edge_list(std::ostream& out, const semantic_network& net) {
    for (const auto& [a, b] : edge_list(net))
        out << a << '\t' << b << '\n';
}

} // namespace storynet
