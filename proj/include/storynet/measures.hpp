#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <vector>

#include "error.hpp"
#include "semnet.hpp"

namespace storynet {

template <undirected_graph G>
std::vector<std::size_t> degrees(const G& g) {
    std::vector<std::size_t> k(g.vertex_count());
    for (vertex_id v = 0; v < k.size(); ++v)
        k[v] = g.neighbors(v).size();
    return k;
}

/// Linked neighbor pairs of `v` (triangles through `v`).
template <undirected_graph G>
std::size_t triangles_at(const G& g, vertex_id v) {
    const auto nv = g.neighbors(v);
    std::size_t twice = 0;
    for (vertex_id u : nv) {
        const auto nu = g.neighbors(u);
        auto a = nv.begin();
        auto b = nu.begin();
        while (a != nv.end() && b != nu.end()) {
            if (*a < *b) {
                ++a;
            } else if (*b < *a) {
                ++b;
            } else {
                ++twice;
                ++a;
                ++b;
            }
        }
    }
    return twice / 2;
}

/// C_i = 2 T_i / (k_i (k_i - 1)); 0 when k_i < 2.
template <undirected_graph G>
std::vector<double> clustering_coefficients(const G& g) {
    std::vector<double> c(g.vertex_count(), 0.0);
    for (vertex_id v = 0; v < c.size(); ++v) {
        const auto k = g.neighbors(v).size();
        if (k < 2)
            continue;
        c[v] = 2.0 * static_cast<double>(triangles_at(g, v)) / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    return c;
}

struct degree_distribution {
    std::map<std::size_t, std::size_t> counts; ///< k -> number of vertices with degree k
    std::size_t n_vertices = 0;

    std::size_t max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }
};

template <undirected_graph G>
degree_distribution degree_distribution_of(const G& g) {
    degree_distribution d;
    d.n_vertices = g.vertex_count();
    for (auto k : degrees(g))
        ++d.counts[k];
    return d;
}

struct clustering_point {
    double mean = 0.0;
    std::size_t count = 0;
};

/// k -> mean C_i over vertices of degree k; only degrees present appear.
using clustering_by_degree_map = std::map<std::size_t, clustering_point>;

template <undirected_graph G>
clustering_by_degree_map clustering_by_degree(const G& g) {
    const auto k = degrees(g);
    const auto c = clustering_coefficients(g);
    clustering_by_degree_map out;
    for (std::size_t v = 0; v < k.size(); ++v) {
        auto& p = out[k[v]];
        p.mean += c[v];
        ++p.count;
    }
    for (auto& [deg, p] : out)
        p.mean /= static_cast<double>(p.count);
    return out;
}

struct geodesic_summary {
    double mean_geodesic = 0.0;
    std::size_t n_vertices = 0;
    bool connected = true;
    std::uint64_t unreachable_pairs = 0;
};

/// Mean shortest path with the diagonal included: sum_{i>=j} d_ij / (N(N+1)/2).
/// When some pairs are unreachable, both sums run over reachable pairs (plus the N zero diagonal terms).
template <undirected_graph G>
geodesic_summary mean_geodesic(const G& g) {
    const std::size_t n = g.vertex_count();
    geodesic_summary s;
    s.n_vertices = n;
    if (n == 0)
        return s;

    std::vector<std::uint32_t> dist(n);
    std::vector<vertex_id> queue(n);
    constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
    std::uint64_t total = 0;
    std::uint64_t reachable_pairs = 0; // i > j
    for (vertex_id src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), unseen);
        dist[src] = 0;
        std::size_t head = 0, tail = 0;
        queue[tail++] = src;
        while (head < tail) {
            const vertex_id v = queue[head++];
            for (vertex_id u : g.neighbors(v))
                if (dist[u] == unseen) {
                    dist[u] = dist[v] + 1;
                    queue[tail++] = u;
                }
        }
        for (vertex_id j = 0; j < src; ++j) {
            if (dist[j] == unseen) {
                ++s.unreachable_pairs;
            } else {
                total += dist[j];
                ++reachable_pairs;
            }
        }
    }
    s.connected = s.unreachable_pairs == 0;
    s.mean_geodesic = static_cast<double>(total) / static_cast<double>(reachable_pairs + n);
    return s;
}

struct small_world_band {
    double lower = 0.25;
    double upper = 4.0;
};

struct small_world_report {
    double mean_geodesic = 0.0;
    double log10_n = 0.0;
    double ratio = 0.0;
    bool small_world = false;
};

inline small_world_report small_world_check(const geodesic_summary& s, small_world_band band = {}) {
    if (s.n_vertices < 2)
        throw data_error("small-world check needs at least 2 vertices");
    small_world_report r;
    r.mean_geodesic = s.mean_geodesic;
    r.log10_n = std::log10(static_cast<double>(s.n_vertices));
    r.ratio = r.mean_geodesic / r.log10_n;
    r.small_world = r.ratio >= band.lower && r.ratio <= band.upper;
    return r;
}

/// Two-column "k value" dump.
template <typename Map, typename Proj>
void write_distribution(std::ostream& out, const Map& points, Proj value) {
    for (const auto& [k, v] : points)
        out << k << '\t' << value(v) << '\n';
}

} // namespace storynet
