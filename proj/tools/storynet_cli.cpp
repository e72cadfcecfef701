#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <storynet/storynet.hpp>

namespace fs = std::filesystem;
using namespace storynet;

namespace {

enum exit_code { ok = 0, usage = 1, data = 2, numerical = 3 };

struct cli_options {
    run_config cfg;
    std::string lemmatizer = "stemmer";
    std::string basis = "words";
    std::string midpoint = "mean";
    std::string manifest;
    std::string features;
    std::string model;
    std::string out;
    std::string text;
    std::string dump_dir;
    std::vector<unsigned> ms{1, 2, 3, 4, 5};
    std::vector<std::size_t> lengths{50, 75, 100, 200, 400};
    bool verbose = false;

    void finalize() {
        cfg.lemmatizer = parse_lemmatizer(lemmatizer);
        cfg.basis = parse_split_basis(basis);
        cfg.midpoint = parse_midpoint_mode(midpoint);
        cfg.validate();
    }
};

void add_common(CLI::App* cmd, cli_options& o) {
    cmd->add_option("--m", o.cfg.m, "word distance")->capture_default_str();
    cmd->add_option("--window", o.cfg.window, "sample length in words")->capture_default_str();
    cmd->add_option("--split-basis", o.basis, "sqrt(N) uses vertices|words")->capture_default_str();
    cmd->add_option("--lemmatizer", o.lemmatizer, "stemmer|identity")->capture_default_str();
    cmd->add_option("--seed", o.cfg.seed, "random seed")->capture_default_str();
    cmd->add_option("--control-fraction", o.cfg.control_fraction, "share of each category used for training")
        ->capture_default_str();
    cmd->add_option("--iterations", o.cfg.iterations, "bootstrap iterations")->capture_default_str();
    cmd->add_option("--jobs", o.cfg.jobs, "worker threads")->capture_default_str();
    cmd->add_flag("--random-offset", o.cfg.random_offset, "start each window at a seeded random word");
    cmd->add_option("--ridge", o.cfg.ridge, "ridge term added to the pooled covariance")->capture_default_str();
    cmd->add_option("--min-points", o.cfg.min_points, "minimum points per power-law fit")->capture_default_str();
    cmd->add_option("--midpoint", o.midpoint, "mean|median threshold between groups")->capture_default_str();
    cmd->add_flag("--with-replacement", o.cfg.with_replacement, "bootstrap draws with replacement");
    cmd->add_flag("!--evaluate-only", o.cfg.retrain, "train once and only re-evaluate in the bootstrap");
    cmd->add_flag("-v,--verbose", o.verbose, "log fit diagnostics to stderr");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw data_error("cannot write " + path);
    return f;
}

void write_text(const std::string& path, const std::string& text) {
    auto f = open_out(path);
    f << text;
}

void dump_distributions(const fs::path& dir, const std::string& id, const semantic_network& net) {
    fs::create_directories(dir);
    {
        auto f = open_out((dir / (id + ".pk.tsv")).string());
        write_distribution(f, degree_distribution_of(net).counts, [](std::size_t n) { return n; });
    }
    auto f = open_out((dir / (id + ".ck.tsv")).string());
    write_distribution(f, clustering_by_degree(net), [](const clustering_point& p) { return p.mean; });
}

void log_row(const feature_row& r) {
    if (!r.features) {
        std::fprintf(stderr, "%s: %s\n", r.id.c_str(), r.error.c_str());
        return;
    }
    const auto& f = *r.features;
    std::fprintf(stderr,
                 "%s: N=%zu words=%zu split=%.2f dropped_bins=%zu gamma1=%.4f (%zu pts, chi2=%.4g) "
                 "gamma2=%.4f (%zu pts, chi2=%.4g) gamma3=%.4f (%zu pts, chi2=%.4g)\n",
                 r.id.c_str(), f.n_vertices, f.n_words, f.split_k, f.dropped_bins, f.gamma1, f.degree_low.n_points,
                 f.degree_low.reduced_chi2, f.gamma2, f.degree_high.n_points, f.degree_high.reduced_chi2, f.gamma3,
                 f.clustering.n_points, f.clustering.reduced_chi2);
}

std::vector<feature_row> load_feature_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error("cannot open feature table " + path);
    return read_feature_csv(in);
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
    return buf;
}

void print_bootstrap(const bootstrap_report& b) {
    for (std::size_t c = 0; c < 2; ++c)
        std::cout << "  " << b.labels[c] << ": " << pct(b.mean_accuracy[c]) << " +/- " << pct(b.error[c]) << '\n';
    if (b.failed_trainings)
        std::cout << "  iterations without a usable model: " << b.failed_trainings << '\n';
}

int cmd_build_net(const cli_options& o) {
    const auto text = read_text(o.text);
    const auto stream = make_stream(text, fs::path(o.text).stem().string(), lemmatizer(o.cfg.lemmatizer));
    const auto net = build_network(stream, o.cfg.m);
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        write_edge_list(f, net);
    }
    if (!o.dump_dir.empty())
        dump_distributions(o.dump_dir, stream.source_id, net);
    std::cout << "vertices " << net.n_vertices() << "\nwords " << net.n_words() << "\nedges " << net.edge_count()
              << '\n';
    return ok;
}

int cmd_features(const cli_options& o) {
    const auto manifest = load_manifest(o.manifest, o.cfg.categories);
    const auto samples = load_streams(manifest, o.cfg.lemmatizer, o.cfg.jobs);
    const auto rows = compute_features(samples, o.cfg);
    if (!o.dump_dir.empty())
        for (const auto& s : samples)
            if (s.stream && s.stream->n_words() >= o.cfg.window)
                dump_distributions(o.dump_dir, s.entry.id,
                                   build_network(window_of(*s.stream, o.cfg.window, o.cfg.random_offset, o.cfg.seed),
                                                 o.cfg.m));
    std::size_t failed = 0;
    for (const auto& r : rows) {
        failed += r.ok() ? 0 : 1;
        if (o.verbose)
            log_row(r);
    }
    if (o.out.empty()) {
        write_feature_csv(std::cout, rows, o.cfg);
    } else {
        auto f = open_out(o.out);
        write_feature_csv(f, rows, o.cfg);
        std::cout << rows.size() << " samples, " << failed << " without features -> " << o.out << '\n';
    }
    return ok;
}

int cmd_train(const cli_options& o) {
    const auto rows = load_feature_file(o.features);
    const auto pool = to_labeled(rows);
    const auto fc = train_on(pool, o.cfg.training(), o.cfg.midpoint);
    if (o.verbose)
        std::fprintf(stderr, "condition number %.4g\n", fc.model.condition_number);
    const auto j = model_json(fc.model, o.cfg);
    if (o.out.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_text(o.out, j.dump(2) + "\n");
    std::cout << "plane: " << format_plane(normalized_plane(fc.model), fc.model.midpoint, 2) << '\n';
    return ok;
}

int cmd_classify(const cli_options& o) {
    std::ifstream in(o.model);
    if (!in)
        throw data_error("cannot open model " + o.model);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw data_error(std::string("model: ") + e.what());
    }
    const auto model = model_from_json(j);
    for (const auto& s : to_labeled(load_feature_file(o.features)))
        std::cout << s.id << '\t' << (s.x ? classify(model, *s.x) : std::string("abstain")) << '\n';
    return ok;
}

int cmd_eval(const cli_options& o) {
    std::vector<feature_row> rows;
    if (!o.features.empty()) {
        rows = load_feature_file(o.features);
    } else if (!o.manifest.empty()) {
        rows = compute_features(load_manifest(o.manifest, o.cfg.categories), o.cfg);
    } else {
        throw usage_error("eval needs --features or --manifest");
    }
    const auto ev = evaluate_rows(rows, o.cfg);
    nlohmann::json report = {{"held_out", accuracy_json(ev.held_out)},
                             {"training", accuracy_json(ev.training)},
                             {"bootstrap", bootstrap_json(ev.bootstrap)},
                             {"samples", rows.size()},
                             {"samples_without_features", ev.n_failed},
                             {"model", model_json(ev.model, o.cfg)},
                             {"config", config_json(o.cfg)}};
    if (!o.out.empty())
        write_text(o.out, report.dump(2) + "\n");
    std::cout << "held-out:\n";
    for (std::size_t c = 0; c < 2; ++c)
        std::cout << "  " << ev.held_out.labels[c] << ": " << pct(ev.held_out.accuracy[c]) << '\n';
    std::cout << "training set:\n";
    for (std::size_t c = 0; c < 2; ++c)
        std::cout << "  " << ev.training.labels[c] << ": " << pct(ev.training.accuracy[c]) << '\n';
    std::cout << "bootstrap (" << ev.bootstrap.iterations << " iterations):\n";
    print_bootstrap(ev.bootstrap);
    return ok;
}

template <typename T>
int run_sweep(const cli_options& o, std::string_view parameter, std::span<const T> values) {
    const auto manifest = load_manifest(o.manifest, o.cfg.categories);
    const auto samples = load_streams(manifest, o.cfg.lemmatizer, o.cfg.jobs);
    std::vector<sweep_row> rows;
    if constexpr (std::is_same_v<T, unsigned>)
        rows = sweep_m(samples, values, o.cfg);
    else
        rows = sweep_length(samples, values, o.cfg);
    std::ostringstream table;
    write_sweep_csv(table, parameter, rows, o.cfg);
    if (o.out.empty())
        std::cout << table.str();
    else
        write_text(o.out, table.str());
    for (const auto& r : rows) {
        std::cout << parameter << '=' << r.parameter << " (" << r.n_failed << "/" << r.n_samples
                  << " without features)\n";
        print_bootstrap(r.bootstrap);
    }
    return ok;
}

int cmd_baseline_zipf(const cli_options& o) {
    const auto manifest = load_manifest(o.manifest, o.cfg.categories);
    const auto samples = load_streams(manifest, o.cfg.lemmatizer, o.cfg.jobs);
    const auto zipf = baseline_zipf(samples, o.cfg);
    const auto rows = compute_features(samples, o.cfg);
    const auto network = bootstrap_pool(to_labeled(rows), o.cfg);
    nlohmann::json report = {{"zipf_mean_midpoint", bootstrap_json(zipf.mean_variant)},
                             {"zipf_median_midpoint", bootstrap_json(zipf.median_variant)},
                             {"zipf_samples_without_exponent", zipf.n_failed},
                             {"network_features", bootstrap_json(network)},
                             {"config", config_json(o.cfg)}};
    if (!o.out.empty())
        write_text(o.out, report.dump(2) + "\n");
    std::cout << "Zipf exponent, mean midpoint:\n";
    print_bootstrap(zipf.mean_variant);
    std::cout << "Zipf exponent, median midpoint:\n";
    print_bootstrap(zipf.median_variant);
    std::cout << "network features (" << to_string(o.cfg.midpoint) << " midpoint):\n";
    print_bootstrap(network);
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fiction vs. news classification from word co-occurrence networks"};
    app.require_subcommand(1);
    cli_options o;

    auto* build = app.add_subcommand("build-net", "build one text's network and write its edge list");
    build->add_option("text", o.text, "UTF-8 text file")->required();
    build->add_option("--out,--dump", o.out, "edge list output (lemma_i<TAB>lemma_j)");
    build->add_option("--dump-distributions", o.dump_dir, "directory for P(k) and C(k) tables");
    add_common(build, o);

    auto* features = app.add_subcommand("features", "extract (gamma1, gamma2, gamma3) per manifest sample");
    features->add_option("--manifest", o.manifest, "JSONL manifest")->required();
    features->add_option("--out", o.out, "feature CSV (stdout if omitted)");
    features->add_option("--dump-distributions", o.dump_dir, "directory for P(k) and C(k) tables");
    add_common(features, o);

    auto* train = app.add_subcommand("train", "fit the discriminant on a feature table");
    train->add_option("--features", o.features, "feature CSV")->required();
    train->add_option("--out", o.out, "model JSON");
    add_common(train, o);

    auto* cls = app.add_subcommand("classify", "label each row of a feature table");
    cls->add_option("--model", o.model, "model JSON")->required();
    cls->add_option("--features", o.features, "feature CSV")->required();
    add_common(cls, o);

    auto* eval = app.add_subcommand("eval", "held-out, training-set and bootstrap accuracy");
    eval->add_option("--features", o.features, "feature CSV");
    eval->add_option("--manifest", o.manifest, "JSONL manifest (features computed on the fly)");
    eval->add_option("--out", o.out, "report JSON");
    add_common(eval, o);

    auto* sweep_m_cmd = app.add_subcommand("sweep-m", "bootstrap accuracy for each word distance");
    sweep_m_cmd->add_option("--manifest", o.manifest, "JSONL manifest")->required();
    sweep_m_cmd->add_option("--ms", o.ms, "word distances")->delimiter(',')->capture_default_str();
    sweep_m_cmd->add_option("--out", o.out, "table CSV");
    add_common(sweep_m_cmd, o);

    auto* sweep_len = app.add_subcommand("sweep-length", "bootstrap accuracy for each window length");
    sweep_len->add_option("--manifest", o.manifest, "JSONL manifest")->required();
    sweep_len->add_option("--lengths", o.lengths, "window lengths")->delimiter(',')->capture_default_str();
    sweep_len->add_option("--out", o.out, "table CSV");
    add_common(sweep_len, o);

    auto* zipf = app.add_subcommand("baseline-zipf", "one-feature discriminant on Zipf exponents");
    zipf->add_option("--manifest", o.manifest, "JSONL manifest")->required();
    zipf->add_option("--out", o.out, "report JSON");
    add_common(zipf, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        o.finalize();
        if (*build)
            return cmd_build_net(o);
        if (*features)
            return cmd_features(o);
        if (*train)
            return cmd_train(o);
        if (*cls)
            return cmd_classify(o);
        if (*eval)
            return cmd_eval(o);
        if (*sweep_m_cmd)
            return run_sweep<unsigned>(o, "m", o.ms);
        if (*sweep_len)
            return run_sweep<std::size_t>(o, "window", o.lengths);
        if (*zipf)
            return cmd_baseline_zipf(o);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const data_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    }
    return usage;
}
