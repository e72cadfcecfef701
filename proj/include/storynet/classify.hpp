#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "corpus.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "tokenize.hpp"

namespace storynet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace detail {

inline void check_dims(std::span<const VectorXd> xs, Eigen::Index dim, const char* what) {
    for (const auto& x : xs)
        if (x.size() != dim)
            throw data_error(std::string("dimension mismatch in ") + what);
}

inline VectorXd mean_of(std::span<const VectorXd> xs) {
    VectorXd m = VectorXd::Zero(xs.front().size());
    for (const auto& x : xs)
        m += x;
    return m / static_cast<double>(xs.size());
}

inline double median_of(std::vector<double> v) {
    if (v.empty())
        throw data_error("median of an empty group");
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2)
        return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Within-group scatter of both groups divided by n1 + n2 - 2.
inline MatrixXd pooled_covariance(std::span<const VectorXd> group1, std::span<const VectorXd> group2) {
    if (group1.empty() || group2.empty())
        throw data_error("pooled covariance needs both groups non-empty");
    if (group1.size() + group2.size() < 3)
        throw data_error("too few samples for pooled covariance (n1 + n2 < 3)");
    const auto dim = group1.front().size();
    detail::check_dims(group1, dim, "group 1");
    detail::check_dims(group2, dim, "group 2");

    MatrixXd s = MatrixXd::Zero(dim, dim);
    for (auto group : {group1, group2}) {
        const VectorXd m = detail::mean_of(group);
        for (const auto& x : group) {
            const VectorXd d = x - m;
            s.noalias() += d * d.transpose();
        }
    }
    return s / static_cast<double>(group1.size() + group2.size() - 2);
}

struct train_options {
    double ridge = 0.0;
    double max_condition = 1e12;
    category_pair labels = default_categories;
};

struct discriminant_model {
    VectorXd direction;
    double midpoint = 0.0;
    VectorXd mean1;
    VectorXd mean2;
    category_pair labels = default_categories;
    VectorXd dispersions;
    double condition_number = 0.0;
    double ridge = 0.0;

    Eigen::Index dimension() const noexcept { return direction.size(); }
};

inline discriminant_model train_discriminant(std::span<const VectorXd> group1, std::span<const VectorXd> group2,
                                             const train_options& opt = {}) {
    MatrixXd s = pooled_covariance(group1, group2);
    const auto dim = s.rows();
    if (opt.ridge > 0.0)
        s += opt.ridge * MatrixXd::Identity(dim, dim);

    Eigen::JacobiSVD<MatrixXd> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= opt.max_condition)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "singular pooled covariance (condition number %.3g exceeds %.3g; ridge = %g, try --ridge)", cond,
                      opt.max_condition, opt.ridge);
        throw numerical_error(buf);
    }

    discriminant_model model;
    model.labels = opt.labels;
    model.mean1 = detail::mean_of(group1);
    model.mean2 = detail::mean_of(group2);
    model.direction = svd.solve(model.mean1 - model.mean2);
    model.midpoint = 0.5 * model.direction.dot(model.mean1 + model.mean2);
    model.condition_number = cond;
    model.ridge = opt.ridge;

    // per-feature sample standard deviation over both groups together
    const std::size_t n = group1.size() + group2.size();
    VectorXd mean = (model.mean1 * static_cast<double>(group1.size()) + model.mean2 * static_cast<double>(group2.size())) /
                    static_cast<double>(n);
    VectorXd ss = VectorXd::Zero(dim);
    for (auto group : {group1, group2})
        for (const auto& x : group)
            ss += (x - mean).cwiseAbs2();
    model.dispersions = n > 1 ? VectorXd((ss / static_cast<double>(n - 1)).cwiseSqrt()) : VectorXd::Zero(dim);
    return model;
}

inline double project(const discriminant_model& model, const VectorXd& x) {
    if (x.size() != model.dimension())
        throw data_error("dimension mismatch: model has " + std::to_string(model.dimension()) + " features, sample has " +
                         std::to_string(x.size()));
    return model.direction.dot(x);
}

/// 0 for the first group (projection at or above the midpoint), 1 for the second.
inline int classify_index(const discriminant_model& model, const VectorXd& x) {
    return project(model, x) >= model.midpoint ? 0 : 1;
}

inline const std::string& classify(const discriminant_model& model, const VectorXd& x) {
    return model.labels[static_cast<std::size_t>(classify_index(model, x))];
}

enum class midpoint_mode { mean, median };

inline std::string_view to_string(midpoint_mode m) { return m == midpoint_mode::mean ? "mean" : "median"; }

inline midpoint_mode parse_midpoint_mode(std::string_view s) {
    if (s == "mean")
        return midpoint_mode::mean;
    if (s == "median")
        return midpoint_mode::median;
    throw usage_error("unknown midpoint mode \"" + std::string(s) + "\" (expected mean|median)");
}

/// Threshold between the two groups' projections, using their means or their medians.
inline double midpoint_variant(const discriminant_model& model, midpoint_mode mode, std::span<const VectorXd> group1,
                               std::span<const VectorXd> group2) {
    if (group1.empty() || group2.empty())
        throw data_error("midpoint needs both groups non-empty");
    if (mode == midpoint_mode::mean)
        return model.midpoint;
    std::vector<double> y1, y2;
    for (const auto& x : group1)
        y1.push_back(project(model, x));
    for (const auto& x : group2)
        y2.push_back(project(model, x));
    return 0.5 * (detail::median_of(std::move(y1)) + detail::median_of(std::move(y2)));
}

/// A sample whose features could not be computed carries no vector.
struct labeled_sample {
    std::string id;
    std::string label;
    std::optional<VectorXd> x;
};

struct accuracy_report {
    category_pair labels = default_categories;
    std::array<double, 2> accuracy{};
    std::array<std::size_t, 2> total{};
    std::array<std::size_t, 2> correct{};
    std::array<std::size_t, 2> abstained{};

    double mean_accuracy() const { return 0.5 * (accuracy[0] + accuracy[1]); }
};

inline std::size_t category_index(const category_pair& labels, std::string_view label) {
    if (label == labels[0])
        return 0;
    if (label == labels[1])
        return 1;
    throw data_error("unknown label \"" + std::string(label) + "\"");
}

/// Correct / total per category. Samples without features score one half.
inline accuracy_report evaluate(const discriminant_model& model, std::span<const labeled_sample> labeled) {
    if (labeled.empty())
        throw data_error("nothing to evaluate");
    accuracy_report r;
    r.labels = model.labels;
    for (const auto& s : labeled) {
        const auto c = category_index(model.labels, s.label);
        ++r.total[c];
        if (!s.x)
            ++r.abstained[c];
        else if (static_cast<std::size_t>(classify_index(model, *s.x)) == c)
            ++r.correct[c];
    }
    for (std::size_t c = 0; c < 2; ++c)
        r.accuracy[c] = r.total[c] == 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : (static_cast<double>(r.correct[c]) + 0.5 * static_cast<double>(r.abstained[c])) /
                                              static_cast<double>(r.total[c]);
    return r;
}

/// Score of a classifier that abstains on everything.
inline accuracy_report chance_report(const category_pair& labels, std::span<const labeled_sample> labeled) {
    accuracy_report r;
    r.labels = labels;
    for (const auto& s : labeled) {
        const auto c = category_index(labels, s.label);
        ++r.total[c];
        ++r.abstained[c];
    }
    for (std::size_t c = 0; c < 2; ++c)
        r.accuracy[c] = r.total[c] == 0 ? std::numeric_limits<double>::quiet_NaN() : 0.5;
    return r;
}

/// Feature vectors of one category, skipping samples without features.
inline std::vector<VectorXd> vectors_of(std::span<const labeled_sample> samples, std::string_view label) {
    std::vector<VectorXd> out;
    for (const auto& s : samples)
        if (s.label == label && s.x)
            out.push_back(*s.x);
    return out;
}

struct fitted_classifier {
    discriminant_model model;
    midpoint_mode mode = midpoint_mode::mean;
};

/// Trains on the samples that have features and applies the midpoint variant.
inline fitted_classifier train_on(std::span<const labeled_sample> control, const train_options& opt,
                                  midpoint_mode mode = midpoint_mode::mean) {
    const auto g1 = vectors_of(control, opt.labels[0]);
    const auto g2 = vectors_of(control, opt.labels[1]);
    fitted_classifier fc{train_discriminant(g1, g2, opt), mode};
    fc.model.midpoint = midpoint_variant(fc.model, mode, g1, g2);
    return fc;
}

struct bootstrap_options {
    std::size_t subset_size = 0; ///< control draws per category
    std::size_t iterations = 200;
    std::uint64_t seed = 0;
    bool with_replacement = false;
    bool retrain = true; ///< false: one model from iteration 0's control draw, re-evaluated each iteration
    midpoint_mode midpoint = midpoint_mode::mean;
    train_options train;
    unsigned jobs = 1;
};

struct bootstrap_report {
    category_pair labels = default_categories;
    std::vector<std::array<double, 2>> accuracies;
    std::array<double, 2> mean_accuracy{};
    std::array<double, 2> error{}; ///< twice the sample standard deviation
    std::size_t iterations = 0;
    std::uint64_t seed = 0;
    std::size_t failed_trainings = 0;
};

namespace detail {

struct resample {
    std::vector<labeled_sample> control;
    std::vector<labeled_sample> eval;
};

inline resample draw(std::span<const labeled_sample> pool, const std::array<std::vector<std::size_t>, 2>& by_cat,
                     const bootstrap_options& opt, std::uint64_t iteration) {
    std::mt19937_64 rng(opt.seed + iteration);
    resample r;
    for (const auto& idx : by_cat) {
        if (opt.with_replacement) {
            std::vector<bool> drawn(idx.size(), false);
            std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
            for (std::size_t i = 0; i < opt.subset_size; ++i) {
                const auto j = pick(rng);
                drawn[j] = true;
                r.control.push_back(pool[idx[j]]);
            }
            for (std::size_t j = 0; j < idx.size(); ++j)
                if (!drawn[j])
                    r.eval.push_back(pool[idx[j]]);
        } else {
            auto order = idx;
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t i = 0; i < order.size(); ++i)
                (i < opt.subset_size ? r.control : r.eval).push_back(pool[order[i]]);
        }
    }
    return r;
}

template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& body) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w)
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += jobs)
                body(i);
        });
}

} // namespace detail

/// Repeated random control/evaluation splits; each iteration is seeded with seed + iteration.
inline bootstrap_report bootstrap_accuracy(std::span<const labeled_sample> pool, const bootstrap_options& opt) {
    if (opt.iterations < 2)
        throw usage_error("bootstrap needs at least 2 iterations");
    if (opt.subset_size < 1)
        throw usage_error("bootstrap subset size must be at least 1");
    const auto& labels = opt.train.labels;
    std::array<std::vector<std::size_t>, 2> by_cat;
    for (std::size_t i = 0; i < pool.size(); ++i)
        by_cat[category_index(labels, pool[i].label)].push_back(i);
    for (std::size_t c = 0; c < 2; ++c)
        if (by_cat[c].size() <= opt.subset_size && !opt.with_replacement)
            throw data_error("pool too small: category \"" + labels[c] + "\" has " + std::to_string(by_cat[c].size()) +
                             " samples, need more than " + std::to_string(opt.subset_size));

    bootstrap_report rep;
    rep.labels = labels;
    rep.iterations = opt.iterations;
    rep.seed = opt.seed;
    rep.accuracies.resize(opt.iterations);
    std::vector<char> failed(opt.iterations, 0);

    auto try_train = [&](std::span<const labeled_sample> control) -> std::optional<fitted_classifier> {
        try {
            return train_on(control, opt.train, opt.midpoint);
        } catch (const data_error&) {
        } catch (const numerical_error&) {
        }
        return std::nullopt;
    };

    std::optional<fitted_classifier> fixed;
    if (!opt.retrain)
        fixed = try_train(detail::draw(pool, by_cat, opt, 0).control);

    detail::parallel_for(opt.iterations, opt.jobs, [&](std::size_t it) {
        const auto rs = detail::draw(pool, by_cat, opt, it);
        const auto fc = opt.retrain ? try_train(rs.control) : fixed;
        accuracy_report ar = fc ? evaluate(fc->model, rs.eval) : chance_report(labels, rs.eval);
        failed[it] = fc ? 0 : 1;
        rep.accuracies[it] = ar.accuracy;
    });

    rep.failed_trainings = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
    for (std::size_t c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (const auto& a : rep.accuracies)
            sum += a[c];
        const double mean = sum / static_cast<double>(rep.iterations);
        double ss = 0.0;
        for (const auto& a : rep.accuracies)
            ss += (a[c] - mean) * (a[c] - mean);
        rep.mean_accuracy[c] = mean;
        rep.error[c] = 2.0 * std::sqrt(ss / static_cast<double>(rep.iterations - 1));
    }
    return rep;
}

/// Rank-frequency power law of lemma counts, most frequent first.
inline power_law_fit zipf_fit(const token_stream& stream) {
    std::unordered_map<std::string_view, std::size_t> freq;
    for (const auto& t : stream.tokens)
        ++freq[t.lemma];
    if (freq.size() < 3)
        throw data_error("Zipf fit needs at least 3 distinct lemmas (got " + std::to_string(freq.size()) + ")");
    std::vector<std::size_t> counts;
    counts.reserve(freq.size());
    for (const auto& [w, n] : freq)
        counts.push_back(n);
    std::sort(counts.begin(), counts.end(), std::greater<>());
    std::vector<sample_point> pts;
    pts.reserve(counts.size());
    for (std::size_t r = 0; r < counts.size(); ++r)
        pts.push_back({static_cast<double>(r + 1), static_cast<double>(counts[r])});
    return fit_power_law(pts, {.min_points = 3, .region = "zipf"});
}

inline double zipf_exponent(const token_stream& stream) { return zipf_fit(stream).gamma; }

/// Plane coefficients for features scaled by their dispersions: sum_i c_i x_i / dispersion_i = midpoint.
inline std::vector<double> normalized_plane(const discriminant_model& model) {
    std::vector<double> c(static_cast<std::size_t>(model.dimension()));
    for (Eigen::Index i = 0; i < model.dimension(); ++i)
        c[static_cast<std::size_t>(i)] = model.direction(i) * model.dispersions(i);
    return c;
}

/// "2.3γ'1 + 8.2γ'2 + 2.2γ'3 = 14.1"
inline std::string format_plane(std::span<const double> coefficients, double rhs, int precision = 1) {
    auto num = [precision](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", precision, v);
        return std::string(buf);
    };
    std::string out;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const double c = coefficients[i];
        if (i == 0)
            out += num(c);
        else
            out += (c < 0 ? " - " : " + ") + num(std::abs(c));
        out += "γ'" + std::to_string(i + 1);
    }
    return out + " = " + num(rhs);
}

} // namespace storynet
