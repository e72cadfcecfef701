#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "classify.hpp"
#include "pipeline.hpp"

namespace storynet {

namespace detail {

inline nlohmann::json to_json(const VectorXd& v) {
    auto a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

inline VectorXd vector_from_json(const nlohmann::json& a, const char* what) {
    if (!a.is_array())
        throw data_error(std::string("model: ") + what + " must be an array");
    VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

// JSON has no NaN; absent categories serialize as null
inline nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

} // namespace detail

inline nlohmann::json config_json(const run_config& c) {
    return {{"m", c.m},
            {"window", c.window},
            {"split_basis", to_string(c.basis)},
            {"lemmatizer", to_string(c.lemmatizer)},
            {"seed", c.seed},
            {"control_fraction", c.control_fraction},
            {"iterations", c.iterations},
            {"random_offset", c.random_offset},
            {"ridge", c.ridge},
            {"min_points", c.min_points},
            {"midpoint", to_string(c.midpoint)},
            {"with_replacement", c.with_replacement},
            {"retrain", c.retrain},
            {"categories", {c.categories[0], c.categories[1]}}};
}

inline nlohmann::json model_json(const discriminant_model& m, const run_config& cfg) {
    const auto plane = normalized_plane(m);
    return {{"labels", {m.labels[0], m.labels[1]}},
            {"direction", detail::to_json(m.direction)},
            {"midpoint", m.midpoint},
            {"mean1", detail::to_json(m.mean1)},
            {"mean2", detail::to_json(m.mean2)},
            {"dispersions", detail::to_json(m.dispersions)},
            {"dispersion_set", "combined control"},
            {"normalized_plane", format_plane(plane, m.midpoint, 2)},
            {"condition_number", m.condition_number},
            {"ridge", m.ridge},
            {"config", config_json(cfg)}};
}

inline discriminant_model model_from_json(const nlohmann::json& j) {
    try {
        discriminant_model m;
        m.labels = {j.at("labels").at(0).get<std::string>(), j.at("labels").at(1).get<std::string>()};
        m.direction = detail::vector_from_json(j.at("direction"), "direction");
        m.midpoint = j.at("midpoint").get<double>();
        m.mean1 = detail::vector_from_json(j.at("mean1"), "mean1");
        m.mean2 = detail::vector_from_json(j.at("mean2"), "mean2");
        m.dispersions = detail::vector_from_json(j.at("dispersions"), "dispersions");
        m.condition_number = j.value("condition_number", 0.0);
        m.ridge = j.value("ridge", 0.0);
        if (m.mean1.size() != m.direction.size() || m.mean2.size() != m.direction.size())
            throw data_error("model: inconsistent dimensions");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("model: ") + e.what());
    }
}

inline nlohmann::json accuracy_json(const accuracy_report& r) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t c = 0; c < 2; ++c)
        j[r.labels[c]] = {{"accuracy", detail::number(r.accuracy[c])},
                          {"correct", r.correct[c]},
                          {"abstained", r.abstained[c]},
                          {"total", r.total[c]}};
    return j;
}

inline nlohmann::json bootstrap_json(const bootstrap_report& r) {
    nlohmann::json j = {{"iterations", r.iterations}, {"seed", r.seed}, {"failed_trainings", r.failed_trainings}};
    for (std::size_t c = 0; c < 2; ++c)
        j["categories"][r.labels[c]] = {{"mean_accuracy", detail::number(r.mean_accuracy[c])},
                                        {"error", detail::number(r.error[c])}};
    return j;
}

} // namespace storynet
