#pragma once

// Brute-force reference computations on dense adjacency matrices.

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <storynet/semnet.hpp>

namespace oracle {

using matrix = std::vector<std::vector<int>>;

inline matrix from_graph(const storynet::adjacency_graph& g) {
    const auto n = g.vertex_count();
    matrix a(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = g.has_edge(static_cast<storynet::vertex_id>(i), static_cast<storynet::vertex_id>(j)) ? 1 : 0;
    return a;
}

inline storynet::adjacency_graph to_graph(const matrix& a) {
    std::vector<std::pair<storynet::vertex_id, storynet::vertex_id>> edges;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i][j])
                edges.emplace_back(static_cast<storynet::vertex_id>(i), static_cast<storynet::vertex_id>(j));
    return storynet::adjacency_graph::from_edges(a.size(), edges);
}

/// Graph on n vertices whose edges are the set bits of `mask` over pairs (i < j) in row order.
inline matrix from_mask(std::size_t n, std::uint64_t mask) {
    matrix a(n, std::vector<int>(n, 0));
    std::size_t bit = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++bit)
            if (mask >> bit & 1)
                a[i][j] = a[j][i] = 1;
    return a;
}

inline matrix random_graph(std::size_t n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    matrix a(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng))
                a[i][j] = a[j][i] = 1;
    return a;
}

inline std::vector<std::size_t> degrees(const matrix& a) {
    std::vector<std::size_t> k(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            k[i] += static_cast<std::size_t>(a[i][j]);
    return k;
}

/// sum_{j,m} a_ij a_jm a_mi / (k_i (k_i - 1)), zero below degree 2.
inline std::vector<double> clustering(const matrix& a) {
    const auto k = degrees(a);
    std::vector<double> c(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (k[i] < 2)
            continue;
        long closed = 0;
        for (std::size_t j = 0; j < a.size(); ++j)
            for (std::size_t m = 0; m < a.size(); ++m)
                closed += a[i][j] * a[j][m] * a[m][i];
        c[i] = static_cast<double>(closed) / static_cast<double>(k[i] * (k[i] - 1));
    }
    return c;
}

constexpr long unreachable = std::numeric_limits<long>::max() / 4;

inline std::vector<std::vector<long>> floyd_warshall(const matrix& a) {
    const auto n = a.size();
    std::vector<std::vector<long>> d(n, std::vector<long>(n, unreachable));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i == j)
                d[i][j] = 0;
            else if (a[i][j])
                d[i][j] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j])
                    d[i][j] = d[i][k] + d[k][j];
    return d;
}

struct geodesic {
    double mean = 0.0;
    long unreachable_pairs = 0;
};

/// sum_{i >= j} d_ij over reachable pairs divided by (reachable pairs i > j) + N.
inline geodesic mean_geodesic(const matrix& a) {
    const auto d = floyd_warshall(a);
    const auto n = a.size();
    long sum = 0, pairs = 0;
    geodesic g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            if (d[i][j] >= unreachable) {
                ++g.unreachable_pairs;
                continue;
            }
            sum += d[i][j];
            ++pairs;
        }
    g.mean = n ? static_cast<double>(sum) / static_cast<double>(pairs) : 0.0;
    return g;
}

inline bool connected(const matrix& a) {
    return mean_geodesic(a).unreachable_pairs == 0;
}

} // namespace oracle
