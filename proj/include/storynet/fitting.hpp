#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "measures.hpp"
#include "semnet.hpp"

namespace storynet {

struct sample_point {
    double k = 0.0;
    double value = 0.0;
};

struct binned_point {
    double k_center = 0.0;
    double value = 0.0;
    std::size_t population = 0;
};

struct binned_series {
    std::vector<binned_point> points;
    unsigned bin_width = 1;
};

/// Averages values over consecutive integer k-intervals of `width`, anchored at the smallest k.
/// The centre of [lo, lo + width - 1] is lo + (width - 1) / 2. Intervals without input produce no point.
template <std::ranges::input_range R>
    requires requires(std::ranges::range_value_t<R> p) {
        { p.first } -> std::convertible_to<long long>;
        { p.second } -> std::convertible_to<double>;
    }
binned_series bin_running_average(const R& raw, unsigned width) {
    if (width < 1)
        throw usage_error("bin width must be at least 1");
    std::vector<std::pair<long long, double>> pts;
    for (const auto& p : raw)
        pts.emplace_back(static_cast<long long>(p.first), static_cast<double>(p.second));
    if (pts.empty())
        throw data_error("cannot bin an empty distribution");
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    const long long lo = pts.front().first;
    const auto w = static_cast<long long>(width);
    binned_series out;
    out.bin_width = width;
    long long current = -1;
    double sum = 0.0;
    std::size_t pop = 0;
    auto flush = [&] {
        if (pop == 0)
            return;
        const double start = static_cast<double>(lo + current * w);
        out.points.push_back({start + (static_cast<double>(width) - 1.0) / 2.0, sum / static_cast<double>(pop), pop});
    };
    for (const auto& [k, v] : pts) {
        const long long bin = (k - lo) / w;
        if (bin != current) {
            flush();
            current = bin;
            sum = 0.0;
            pop = 0;
        }
        sum += v;
        ++pop;
    }
    flush();
    return out;
}

struct power_law_fit {
    double gamma = 0.0;
    double amplitude = 0.0;
    double k_min = 0.0;
    double k_max = 0.0;
    std::size_t n_points = 0;
    double reduced_chi2 = 0.0;
};

struct fit_options {
    double k_min = -std::numeric_limits<double>::infinity();
    double k_max = std::numeric_limits<double>::infinity();
    std::size_t min_points = 3;
    std::string region = "fit";
};

/// Least squares line through (ln k, ln value) over points with k in range and value > 0.
/// value ~ amplitude * k^-gamma; reduced chi^2 uses unit weights in log space.
inline power_law_fit fit_power_law(std::span<const sample_point> points, const fit_options& opt = {}) {
    std::vector<std::pair<double, double>> xy;
    std::size_t in_range = 0;
    for (const auto& p : points) {
        if (p.k < opt.k_min || p.k > opt.k_max)
            continue;
        ++in_range;
        if (p.value > 0.0 && p.k > 0.0)
            xy.emplace_back(std::log(p.k), std::log(p.value));
    }
    if (in_range > 0 && xy.empty())
        throw fit_error(opt.region, "all values zero in range");
    if (xy.size() < std::max<std::size_t>(opt.min_points, 2))
        throw fit_error(opt.region, "insufficient points (" + std::to_string(xy.size()) + " < " +
                                        std::to_string(std::max<std::size_t>(opt.min_points, 2)) + ")");

    const double n = static_cast<double>(xy.size());
    double mx = 0.0, my = 0.0;
    for (auto [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (auto [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0.0))
        throw fit_error(opt.region, "all points share one k");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (auto [x, y] : xy) {
        const double r = y - (intercept + slope * x);
        ssr += r * r;
    }

    power_law_fit fit;
    fit.gamma = -slope;
    fit.amplitude = std::exp(intercept);
    fit.n_points = xy.size();
    fit.reduced_chi2 = xy.size() > 2 ? ssr / (n - 2.0) : 0.0;
    auto [lo, hi] = std::minmax_element(xy.begin(), xy.end());
    fit.k_min = std::exp(lo->first);
    fit.k_max = std::exp(hi->first);
    return fit;
}

inline std::vector<sample_point> to_points(const binned_series& s) {
    std::vector<sample_point> out;
    out.reserve(s.points.size());
    for (const auto& p : s.points)
        out.push_back({p.k_center, p.value});
    return out;
}

inline power_law_fit fit_power_law(const binned_series& series, const fit_options& opt = {}) {
    const auto pts = to_points(series);
    return fit_power_law(std::span<const sample_point>(pts), opt);
}

enum class split_basis { vertices, words };

inline std::string_view to_string(split_basis b) { return b == split_basis::vertices ? "vertices" : "words"; }

inline split_basis parse_split_basis(std::string_view s) {
    if (s == "vertices")
        return split_basis::vertices;
    if (s == "words")
        return split_basis::words;
    throw usage_error("unknown split basis \"" + std::string(s) + "\" (expected vertices|words)");
}

struct feature_options {
    split_basis basis = split_basis::words;
    std::size_t min_points = 3;
    unsigned bin_width = 0; ///< 0 selects 2m
    bool with_geodesic = false;
};

struct feature_vector {
    std::string sample_id;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    std::optional<double> mean_geodesic;
    std::size_t n_vertices = 0;
    std::size_t n_words = 0;
    unsigned m = 0;

    // diagnostics
    double split_k = 0.0;
    power_law_fit degree_low;
    power_law_fit degree_high;
    power_law_fit clustering;
    std::size_t dropped_bins = 0;

    std::array<double, 3> gammas() const { return {gamma1, gamma2, gamma3}; }
};

/// P(k) tabulated at every integer k from 1 to the largest degree, zeros included.
inline std::map<long long, double> dense_degree_counts(const degree_distribution& d) {
    std::map<long long, double> out;
    for (std::size_t k = 1; k <= d.max_degree(); ++k) {
        auto it = d.counts.find(k);
        out[static_cast<long long>(k)] = it == d.counts.end() ? 0.0 : static_cast<double>(it->second);
    }
    return out;
}

struct degree_region_fits {
    power_law_fit low;
    power_law_fit high;
    std::size_t dropped_bins = 0;
};

/// Binned P(k) fitted separately below and at-or-above `split_k`; empty bins are dropped.
inline degree_region_fits fit_degree_regions(const std::map<long long, double>& dense, double split_k,
                                             unsigned width, std::size_t min_points = 3) {
    if (dense.empty())
        throw fit_error("gamma1", "network has no edges");
    const auto binned = bin_running_average(dense, width);
    degree_region_fits out;
    std::vector<sample_point> low, high;
    for (const auto& p : binned.points) {
        if (!(p.value > 0.0)) {
            ++out.dropped_bins;
            continue;
        }
        (p.k_center < split_k ? low : high).push_back({p.k_center, p.value});
    }
    char split_text[32];
    std::snprintf(split_text, sizeof split_text, "%.2f", split_k);
    out.low = fit_power_law(low, {.min_points = min_points,
                                  .region = std::string("gamma1 region (k < ") + split_text + ")"});
    out.high = fit_power_law(high, {.min_points = min_points,
                                    .region = std::string("gamma2 region (k >= ") + split_text + ")"});
    return out;
}

/// Degree exponents below and above k = sqrt(N) from the binned P(k), plus the C(k) exponent.
inline feature_vector extract_features(const semantic_network& net, const feature_options& opt = {},
                                       std::string sample_id = {}) {
    feature_vector f;
    f.sample_id = std::move(sample_id);
    f.n_vertices = net.n_vertices();
    f.n_words = net.n_words();
    f.m = net.m();

    const unsigned width = opt.bin_width ? opt.bin_width : 2 * net.m();
    const double n_basis = static_cast<double>(opt.basis == split_basis::vertices ? f.n_vertices : f.n_words);
    f.split_k = std::sqrt(n_basis);
    const auto regions = fit_degree_regions(dense_degree_counts(degree_distribution_of(net)), f.split_k, width,
                                            opt.min_points);
    f.degree_low = regions.low;
    f.degree_high = regions.high;
    f.dropped_bins = regions.dropped_bins;

    std::vector<sample_point> ck;
    for (const auto& [k, p] : clustering_by_degree(net))
        if (k > 0 && p.mean > 0.0)
            ck.push_back({static_cast<double>(k), p.mean});
    f.clustering = fit_power_law(ck, {.min_points = opt.min_points, .region = "gamma3 region (C(k))"});

    f.gamma1 = f.degree_low.gamma;
    f.gamma2 = f.degree_high.gamma;
    f.gamma3 = f.clustering.gamma;
    if (!std::isfinite(f.gamma1) || !std::isfinite(f.gamma2) || !std::isfinite(f.gamma3))
        throw numerical_error("non-finite exponent");
    if (opt.with_geodesic)
        f.mean_geodesic = mean_geodesic(net).mean_geodesic;
    return f;
}

} // namespace storynet
