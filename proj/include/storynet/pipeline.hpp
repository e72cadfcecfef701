#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "classify.hpp"
#include "corpus.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "measures.hpp"
#include "semnet.hpp"
#include "tokenize.hpp"

namespace storynet {

struct run_config {
    unsigned m = 4;
    std::size_t window = 500;
    split_basis basis = split_basis::words;
    lemmatizer_kind lemmatizer = lemmatizer_kind::stemmer;
    std::uint64_t seed = 1;
    double control_fraction = 0.5;
    std::size_t iterations = 200;
    unsigned jobs = 1;
    bool random_offset = false;
    double ridge = 0.0;
    std::size_t min_points = 3;
    midpoint_mode midpoint = midpoint_mode::mean;
    bool with_replacement = false;
    bool retrain = true;
    category_pair categories = default_categories;

    void validate() const {
        if (m < 1)
            throw usage_error("--m must be at least 1");
        if (window < 1)
            throw usage_error("--window must be at least 1");
        if (!(control_fraction > 0.0 && control_fraction < 1.0))
            throw usage_error("--control-fraction must lie in (0, 1)");
        if (iterations < 2)
            throw usage_error("--iterations must be at least 2");
        if (ridge < 0.0)
            throw usage_error("--ridge must be non-negative");
    }

    feature_options features() const {
        return {.basis = basis, .min_points = min_points, .bin_width = 0, .with_geodesic = true};
    }

    train_options training() const { return {.ridge = ridge, .max_condition = 1e12, .labels = categories}; }
};

/// "key=value" pairs sufficient to rerun a table.
inline std::string config_echo(const run_config& c) {
    std::ostringstream s;
    s << "m=" << c.m << " window=" << c.window << " split_basis=" << to_string(c.basis)
      << " lemmatizer=" << to_string(c.lemmatizer) << " seed=" << c.seed << " control_fraction=" << c.control_fraction
      << " iterations=" << c.iterations << " random_offset=" << (c.random_offset ? 1 : 0) << " ridge=" << c.ridge
      << " min_points=" << c.min_points << " midpoint=" << to_string(c.midpoint)
      << " with_replacement=" << (c.with_replacement ? 1 : 0) << " retrain=" << (c.retrain ? 1 : 0)
      << " categories=" << c.categories[0] << ',' << c.categories[1];
    return s.str();
}

/// Tokenized text of one manifest entry, or the reason it could not be read.
struct loaded_sample {
    manifest_entry entry;
    std::optional<token_stream> stream;
    std::string error;
};

inline std::vector<loaded_sample> load_streams(const corpus_manifest& manifest, lemmatizer_kind kind, unsigned jobs = 1) {
    std::vector<loaded_sample> out(manifest.size());
    const lemmatizer lem(kind);
    detail::parallel_for(manifest.size(), jobs, [&](std::size_t i) {
        auto& s = out[i];
        s.entry = manifest.entries[i];
        try {
            s.stream = make_stream(read_text(s.entry.path), s.entry.id, lem);
        } catch (const std::exception& e) {
            s.error = e.what();
        }
    });
    return out;
}

struct feature_row {
    std::string id;
    std::string label;
    std::optional<feature_vector> features;
    std::string error;
    std::size_t n_vertices = 0;
    std::size_t n_words = 0;
    unsigned m = 0;
    std::optional<double> mean_geodesic;

    bool ok() const noexcept { return features.has_value(); }
};

/// Window of `window` words at the start of the stream, or at a seeded random offset.
inline token_stream window_of(const token_stream& s, std::size_t window, bool random_offset, std::uint64_t seed) {
    if (s.n_words() < window)
        throw data_error("sample shorter than window (" + std::to_string(s.n_words()) + " < " + std::to_string(window) +
                         " words)");
    const std::size_t start = random_offset ? random_window_start(s.source_id, s.n_words(), window, seed) : 0;
    return extract_window(s, sample_window{s.source_id, start, window});
}

inline feature_row features_of(const loaded_sample& sample, const run_config& cfg) {
    feature_row row;
    row.id = sample.entry.id;
    row.label = sample.entry.label;
    row.m = cfg.m;
    if (!sample.stream) {
        row.error = sample.error;
        return row;
    }
    try {
        const auto win = window_of(*sample.stream, cfg.window, cfg.random_offset, cfg.seed);
        const auto net = build_network(win, cfg.m);
        row.n_vertices = net.n_vertices();
        row.n_words = net.n_words();
        row.mean_geodesic = mean_geodesic(net).mean_geodesic;
        auto f = extract_features(net, cfg.features(), row.id);
        row.features = std::move(f);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

/// One row per sample, sorted by id.
inline std::vector<feature_row> compute_features(std::span<const loaded_sample> samples, const run_config& cfg) {
    std::vector<feature_row> rows(samples.size());
    detail::parallel_for(samples.size(), cfg.jobs, [&](std::size_t i) { rows[i] = features_of(samples[i], cfg); });
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return rows;
}

inline std::vector<feature_row> compute_features(const corpus_manifest& manifest, const run_config& cfg) {
    const auto samples = load_streams(manifest, cfg.lemmatizer, cfg.jobs);
    return compute_features(samples, cfg);
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + '"';
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

inline double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw data_error(std::string("bad ") + what + " value \"" + s + "\"");
    }
}

} // namespace detail

inline const char* feature_csv_header = "id,label,gamma1,gamma2,gamma3,l,n_vertices,n_words,m,error";

inline void write_feature_csv(std::ostream& out, std::span<const feature_row> rows, const run_config& cfg) {
    out << "# " << config_echo(cfg) << '\n' << feature_csv_header << '\n';
    for (const auto& r : rows) {
        out << detail::csv_field(r.id) << ',' << detail::csv_field(r.label) << ',';
        if (r.features)
            out << detail::fmt_double(r.features->gamma1) << ',' << detail::fmt_double(r.features->gamma2) << ','
                << detail::fmt_double(r.features->gamma3);
        else
            out << ",,";
        out << ',' << (r.mean_geodesic ? detail::fmt_double(*r.mean_geodesic) : std::string()) << ',' << r.n_vertices
            << ',' << r.n_words << ',' << r.m << ',' << detail::csv_field(r.error) << '\n';
    }
}

/// Reads a feature table; '#' lines are comments.
inline std::vector<feature_row> read_feature_csv(std::istream& in) {
    std::vector<feature_row> rows;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const auto f = detail::split_csv_line(line);
        if (!header) {
            if (f.size() < 9 || f[0] != "id" || f[1] != "label" || f[2] != "gamma1")
                throw data_error("feature table: unexpected header");
            header = true;
            continue;
        }
        if (f.size() < 9)
            throw data_error("feature table line " + std::to_string(lineno) + ": expected at least 9 columns");
        feature_row r;
        r.id = f[0];
        r.label = f[1];
        r.n_vertices = static_cast<std::size_t>(detail::parse_double(f[6], "n_vertices"));
        r.n_words = static_cast<std::size_t>(detail::parse_double(f[7], "n_words"));
        r.m = static_cast<unsigned>(detail::parse_double(f[8], "m"));
        r.error = f.size() > 9 ? f[9] : std::string();
        if (!f[5].empty())
            r.mean_geodesic = detail::parse_double(f[5], "l");
        if (!f[2].empty() && !f[3].empty() && !f[4].empty()) {
            feature_vector v;
            v.sample_id = r.id;
            v.gamma1 = detail::parse_double(f[2], "gamma1");
            v.gamma2 = detail::parse_double(f[3], "gamma2");
            v.gamma3 = detail::parse_double(f[4], "gamma3");
            v.mean_geodesic = r.mean_geodesic;
            v.n_vertices = r.n_vertices;
            v.n_words = r.n_words;
            v.m = r.m;
            r.features = v;
        } else if (r.error.empty()) {
            r.error = "missing features";
        }
        rows.push_back(std::move(r));
    }
    if (!header)
        throw data_error("feature table: missing header");
    return rows;
}

inline std::vector<labeled_sample> to_labeled(std::span<const feature_row> rows) {
    std::vector<labeled_sample> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        labeled_sample s{r.id, r.label, std::nullopt};
        if (r.features)
            s.x = VectorXd{{r.features->gamma1, r.features->gamma2, r.features->gamma3}};
        out.push_back(std::move(s));
    }
    return out;
}

inline std::size_t bootstrap_subset_size(std::span<const labeled_sample> pool, const run_config& cfg) {
    std::array<std::size_t, 2> n{};
    for (const auto& s : pool)
        ++n[category_index(cfg.categories, s.label)];
    const auto smaller = std::min(n[0], n[1]);
    return static_cast<std::size_t>(cfg.control_fraction * static_cast<double>(smaller));
}

inline bootstrap_report bootstrap_pool(std::span<const labeled_sample> pool, const run_config& cfg) {
    bootstrap_options opt;
    opt.subset_size = bootstrap_subset_size(pool, cfg);
    opt.iterations = cfg.iterations;
    opt.seed = cfg.seed;
    opt.with_replacement = cfg.with_replacement;
    opt.retrain = cfg.retrain;
    opt.midpoint = cfg.midpoint;
    opt.train = cfg.training();
    opt.jobs = cfg.jobs;
    return bootstrap_accuracy(pool, opt);
}

/// Accuracy on a seeded control/evaluation split, on the control set itself, and by bootstrap.
struct evaluation {
    accuracy_report held_out;
    accuracy_report training;
    discriminant_model model;
    bootstrap_report bootstrap;
    std::size_t n_failed = 0;
};

inline evaluation evaluate_rows(std::span<const feature_row> rows, const run_config& cfg) {
    const auto pool = to_labeled(rows);
    corpus_manifest ids;
    for (const auto& s : pool)
        ids.entries.push_back({s.id, {}, s.label});
    const auto split = split_control_eval(ids, cfg.control_fraction, cfg.seed, cfg.categories);

    auto pick = [&](const corpus_manifest& part) {
        std::vector<labeled_sample> out;
        std::size_t j = 0;
        for (const auto& s : pool)
            if (j < part.size() && part.entries[j].id == s.id) {
                out.push_back(s);
                ++j;
            }
        return out;
    };
    const auto control = pick(split.control);
    const auto held = pick(split.eval);

    evaluation ev;
    const auto fc = train_on(control, cfg.training(), cfg.midpoint);
    ev.model = fc.model;
    ev.held_out = evaluate(ev.model, held);
    ev.training = evaluate(ev.model, control);
    ev.bootstrap = bootstrap_pool(pool, cfg);
    ev.n_failed = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.ok(); }));
    return ev;
}

struct sweep_row {
    std::size_t parameter = 0; ///< m or window length
    bootstrap_report bootstrap;
    std::size_t n_samples = 0;
    std::size_t n_failed = 0;
    std::size_t n_gamma_ordered = 0; ///< samples with gamma2 < gamma1
};

inline sweep_row sweep_point(std::span<const loaded_sample> samples, const run_config& cfg, std::size_t parameter) {
    const auto rows = compute_features(samples, cfg);
    sweep_row r;
    r.parameter = parameter;
    r.n_samples = rows.size();
    for (const auto& row : rows) {
        if (!row.ok())
            ++r.n_failed;
        else if (row.features->gamma2 < row.features->gamma1)
            ++r.n_gamma_ordered;
    }
    const auto pool = to_labeled(rows);
    r.bootstrap = bootstrap_pool(pool, cfg);
    return r;
}

inline std::vector<sweep_row> sweep_m(std::span<const loaded_sample> samples, std::span<const unsigned> ms,
                                      run_config cfg) {
    if (ms.empty())
        throw usage_error("empty m list");
    std::vector<sweep_row> out;
    for (unsigned m : ms) {
        cfg.m = m;
        cfg.validate();
        out.push_back(sweep_point(samples, cfg, m));
    }
    return out;
}

inline std::vector<sweep_row> sweep_length(std::span<const loaded_sample> samples, std::span<const std::size_t> lengths,
                                           run_config cfg) {
    if (lengths.empty())
        throw usage_error("empty length list");
    std::vector<sweep_row> out;
    for (auto len : lengths) {
        cfg.window = len;
        cfg.validate();
        out.push_back(sweep_point(samples, cfg, len));
    }
    return out;
}

inline void write_sweep_csv(std::ostream& out, std::string_view parameter, std::span<const sweep_row> rows,
                            const run_config& cfg) {
    out << "# " << config_echo(cfg) << '\n';
    out << parameter << ',' << cfg.categories[0] << "_accuracy," << cfg.categories[0] << "_error," << cfg.categories[1]
        << "_accuracy," << cfg.categories[1] << "_error,n_samples,n_failed,failed_trainings\n";
    for (const auto& r : rows)
        out << r.parameter << ',' << detail::fmt_double(r.bootstrap.mean_accuracy[0]) << ','
            << detail::fmt_double(r.bootstrap.error[0]) << ',' << detail::fmt_double(r.bootstrap.mean_accuracy[1]) << ','
            << detail::fmt_double(r.bootstrap.error[1]) << ',' << r.n_samples << ',' << r.n_failed << ','
            << r.bootstrap.failed_trainings << '\n';
}

struct zipf_row {
    std::string id;
    std::string label;
    std::optional<double> exponent;
    std::string error;
};

inline std::vector<zipf_row> zipf_rows(std::span<const loaded_sample> samples, const run_config& cfg) {
    std::vector<zipf_row> rows(samples.size());
    detail::parallel_for(samples.size(), cfg.jobs, [&](std::size_t i) {
        const auto& s = samples[i];
        auto& r = rows[i];
        r.id = s.entry.id;
        r.label = s.entry.label;
        if (!s.stream) {
            r.error = s.error;
            return;
        }
        try {
            r.exponent = zipf_exponent(window_of(*s.stream, cfg.window, cfg.random_offset, cfg.seed));
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    });
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return rows;
}

inline std::vector<labeled_sample> to_labeled(std::span<const zipf_row> rows) {
    std::vector<labeled_sample> out;
    for (const auto& r : rows) {
        labeled_sample s{r.id, r.label, std::nullopt};
        if (r.exponent)
            s.x = VectorXd::Constant(1, *r.exponent);
        out.push_back(std::move(s));
    }
    return out;
}

struct zipf_baseline {
    bootstrap_report mean_variant;
    bootstrap_report median_variant;
    std::size_t n_failed = 0;
};

inline zipf_baseline baseline_zipf(std::span<const loaded_sample> samples, run_config cfg) {
    const auto rows = zipf_rows(samples, cfg);
    const auto pool = to_labeled(std::span<const zipf_row>(rows));
    zipf_baseline b;
    b.n_failed = static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.exponent; }));
    cfg.midpoint = midpoint_mode::mean;
    b.mean_variant = bootstrap_pool(pool, cfg);
    cfg.midpoint = midpoint_mode::median;
    b.median_variant = bootstrap_pool(pool, cfg);
    return b;
}

} // namespace storynet
