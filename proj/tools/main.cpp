#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperwalk/report_io.hpp"
#include "hyperwalk/tasks.hpp"

namespace hw = hyperwalk;
namespace fs = std::filesystem;

namespace {

struct DatasetOpts {
    std::string dataset;
    std::string format = "hyperedges";
    std::string weighting = "sender-first";
    std::string level = "city";
    std::string country_map;
    std::string party_map;
};

struct PipelineOpts {
    int folds = 10;
    double probe_fraction = 0.1;
    std::string sampler = "alpha";
    double alpha = 0.5;
    int k = 2;
    std::string methods = "markov,clique,hyperwalk";
    int k_steps = 10;
    int n_walks = 10000;
    std::string bins = "2-";
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out = ".";
    bool dump_folds = false;
};

// key=value config support: flags given on the command line take priority,
// everything else falls back to the config file.
struct OptionRegistry {
    struct Entry {
        CLI::Option* option;
        std::function<void(const std::string&)> assign;
    };
    std::map<std::string, Entry> entries;

    template <typename T>
    void bind(CLI::Option* option, const std::string& flag, T& target) {
        entries[flag.substr(2)] = {option, [&target](const std::string& raw) {
            if constexpr (std::is_same_v<T, std::string>) {
                target = raw;
            } else if constexpr (std::is_same_v<T, bool>) {
                target = raw == "1" || raw == "true";
            } else if constexpr (std::is_same_v<T, int>) {
                target = std::stoi(raw);
            } else if constexpr (std::is_same_v<T, double>) {
                target = std::stod(raw);
            } else {
                target = static_cast<T>(std::stoull(raw));
            }
        }};
    }

    void apply(const std::string& path) const {
        std::ifstream in(path);
        if (!in) throw hw::Error("cannot open config file: " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#' || line[0] == '[') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw hw::InvalidArgument(path + ":" + std::to_string(lineno) +
                                          ": expected key=value");
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            const auto it = entries.find(key);
            if (it == entries.end())
                throw hw::InvalidArgument(path + ":" + std::to_string(lineno) +
                                          ": unknown option '" + key + "'");
            if (it->second.option->count() > 0) continue;  // flag wins
            it->second.assign(value);
        }
    }
};

hw::Weighting parse_weighting(const std::string& name) {
    if (name == "uniform") return hw::Weighting::uniform;
    if (name == "sender-first") return hw::Weighting::sender_first;
    if (name == "party-aware") return hw::Weighting::party_aware;
    throw hw::InvalidArgument("unknown weighting '" + name + "'");
}

hw::SamplerKind parse_sampler(const std::string& name) {
    if (name == "alpha") return hw::SamplerKind::alpha;
    if (name == "k-replace") return hw::SamplerKind::k_replace;
    if (name == "degree-matched") return hw::SamplerKind::degree_matched;
    throw hw::InvalidArgument("unknown sampler '" + name + "'");
}

std::vector<hw::Method> parse_methods(const std::string& spec) {
    std::vector<hw::Method> methods;
    std::string item;
    std::istringstream in(spec);
    while (std::getline(in, item, ','))
        if (!item.empty()) methods.push_back(hw::method_from_name(item));
    if (methods.empty()) throw hw::InvalidArgument("no methods given");
    return methods;
}

hw::Hypergraph load_dataset(const DatasetOpts& opts, hw::LoadStats* stats) {
    if (opts.format == "hyperedges") {
        std::unordered_map<std::string, hw::Party> parties;
        const hw::Weighting weighting = parse_weighting(opts.weighting);
        if (weighting == hw::Weighting::party_aware) {
            if (opts.party_map.empty())
                throw hw::InvalidArgument("party-aware weighting needs --party-map");
            parties = hw::read_party_map(opts.party_map);
        }
        return hw::load_hyperedge_list(opts.dataset, weighting,
                                       parties.empty() ? nullptr : &parties, stats);
    }
    if (opts.format == "cables-csv") {
        const auto records = hw::read_cable_csv(opts.dataset, stats);
        std::unordered_map<std::string, std::string> countries;
        const hw::CableLevel level =
            opts.level == "country" ? hw::CableLevel::country : hw::CableLevel::city;
        if (level == hw::CableLevel::country && !opts.country_map.empty())
            countries = hw::read_country_map(opts.country_map);
        return hw::build_edvw_from_cables(records, level, countries, stats);
    }
    throw hw::InvalidArgument("unknown format '" + opts.format +
                              "' (expected hyperedges|cables-csv)");
}

hw::PipelineConfig to_pipeline_config(const PipelineOpts& opts) {
    hw::PipelineConfig config;
    config.folds = opts.folds;
    config.probe_fraction = opts.probe_fraction;
    config.sampler = parse_sampler(opts.sampler);
    config.alpha = opts.alpha;
    config.k_substitute = opts.k;
    config.methods = parse_methods(opts.methods);
    config.max_steps = opts.k_steps;
    config.n_walks = opts.n_walks;
    config.bins = hw::parse_bins(opts.bins);
    config.seed = opts.seed;
    config.threads = opts.threads;
    return config;
}

template <typename T>
void reg(CLI::App* cmd, OptionRegistry& registry, const std::string& flag, T& target,
         const std::string& help) {
    registry.bind(cmd->add_option(flag, target, help), flag, target);
}

void add_dataset_flags(CLI::App* cmd, OptionRegistry& registry, DatasetOpts& opts) {
    reg(cmd, registry, "--dataset", opts.dataset, "Input dataset path");
    reg(cmd, registry, "--format", opts.format, "Dataset format: hyperedges|cables-csv");
    reg(cmd, registry, "--weighting", opts.weighting,
        "Vertex weighting: uniform|sender-first|party-aware");
    reg(cmd, registry, "--level", opts.level, "Cable aggregation level: city|country");
    reg(cmd, registry, "--country-map", opts.country_map, "city,country CSV for country level");
    reg(cmd, registry, "--party-map", opts.party_map, "node,party CSV for party-aware weighting");
}

void add_pipeline_flags(CLI::App* cmd, OptionRegistry& registry, PipelineOpts& opts) {
    reg(cmd, registry, "--folds", opts.folds, "Cross-validation folds");
    reg(cmd, registry, "--probe-fraction", opts.probe_fraction, "Probe fraction per fold");
    reg(cmd, registry, "--sampler", opts.sampler, "alpha|k-replace|degree-matched");
    reg(cmd, registry, "--alpha", opts.alpha, "Alpha sampler parameter");
    reg(cmd, registry, "--k", opts.k, "Substitution count for k-replace/degree-matched");
    reg(cmd, registry, "--methods", opts.methods, "Comma list of markov,clique,hyperwalk");
    reg(cmd, registry, "--K-steps", opts.k_steps, "Maximum walk steps K");
    reg(cmd, registry, "--n-walks", opts.n_walks, "Monte Carlo walks per start vertex");
    reg(cmd, registry, "--bins", opts.bins, "Size bins, e.g. 3-6,7-10,11-");
    reg(cmd, registry, "--seed", opts.seed, "Master random seed");
    reg(cmd, registry, "--threads", opts.threads, "Worker threads (0 = all cores)");
    reg(cmd, registry, "--out", opts.out, "Output directory");
    registry.bind(cmd->add_flag("--dump-folds", opts.dump_folds,
                                "Write fold splits and fakes as JSON"),
                  "--dump-folds", opts.dump_folds);
}

std::string sanitize_token(const std::string& name) {
    std::string out = name;
    for (char& c : out)
        if (std::isspace(static_cast<unsigned char>(c))) c = '_';
    return out;
}

void report_warnings(const hw::LoadStats& stats) {
    for (const auto& warning : stats.warnings) std::cerr << "warning: " << warning << "\n";
}

// Effective configuration as a key=value file that --config can read back.
void write_run_config(const fs::path& dir, const DatasetOpts& data, const PipelineOpts& pipe) {
    std::string out;
    out += "dataset=" + data.dataset + "\n";
    out += "format=" + data.format + "\n";
    out += "weighting=" + data.weighting + "\n";
    out += "level=" + data.level + "\n";
    if (!data.country_map.empty()) out += "country-map=" + data.country_map + "\n";
    if (!data.party_map.empty()) out += "party-map=" + data.party_map + "\n";
    out += "folds=" + std::to_string(pipe.folds) + "\n";
    out += "probe-fraction=" + hw::format_double(pipe.probe_fraction) + "\n";
    out += "sampler=" + pipe.sampler + "\n";
    out += "alpha=" + hw::format_double(pipe.alpha) + "\n";
    out += "k=" + std::to_string(pipe.k) + "\n";
    out += "methods=" + pipe.methods + "\n";
    out += "K-steps=" + std::to_string(pipe.k_steps) + "\n";
    out += "n-walks=" + std::to_string(pipe.n_walks) + "\n";
    out += "bins=" + pipe.bins + "\n";
    out += "seed=" + std::to_string(pipe.seed) + "\n";
    out += "threads=" + std::to_string(pipe.threads) + "\n";
    hw::write_file((dir / "run_config.cfg").string(), out);
}

void dump_fold_files(const fs::path& dir, const hw::Hypergraph& h,
                     const hw::PipelineConfig& config, bool with_negatives) {
    for (int fold = 0; fold < config.folds; ++fold) {
        const hw::FoldSplit split = hw::split_train_probe(
            h, config.probe_fraction, hw::derive_seed(config.seed, {1, (std::uint64_t)fold}),
            fold);
        hw::write_file((dir / ("fold_" + std::to_string(fold) + ".json")).string(),
                       hw::to_json_string(split, h));
        if (!with_negatives) continue;
        hw::NegativeSet negatives;
        const std::uint64_t seed = hw::derive_seed(config.seed, {2, (std::uint64_t)fold});
        switch (config.sampler) {
            case hw::SamplerKind::alpha:
                negatives = hw::sample_alpha(h, split.probe, config.alpha, seed);
                break;
            case hw::SamplerKind::k_replace:
                negatives = hw::sample_k_replace(h, split.probe, config.k_substitute, seed);
                break;
            case hw::SamplerKind::degree_matched:
                negatives = hw::sample_degree_matched(h, split.probe, config.k_substitute, seed);
                break;
        }
        hw::write_file((dir / ("fakes_" + std::to_string(fold) + ".json")).string(),
                       hw::to_json_string(negatives, h));
    }
}

int cmd_ingest(const DatasetOpts& data, const std::string& out_dir) {
    hw::LoadStats stats;
    const hw::Hypergraph h = load_dataset(data, &stats);
    report_warnings(stats);

    std::cout << "nodes: " << h.node_count() << "\n";
    std::cout << "edges: " << h.edge_count() << "\n";
    std::map<std::size_t, std::size_t> histogram;
    for (hw::EdgeId e = 0; static_cast<std::size_t>(e) < h.edge_count(); ++e)
        ++histogram[h.members(e).size()];
    std::cout << "size histogram:\n";
    for (const auto& [size, count] : histogram)
        std::cout << "  " << size << " " << count << "\n";

    fs::create_directories(out_dir);
    std::string normalized;
    for (hw::EdgeId e = 0; static_cast<std::size_t>(e) < h.edge_count(); ++e) {
        const auto& members = h.members(e);
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i) normalized += ' ';
            normalized += sanitize_token(h.node_name(members[i]));
        }
        normalized += '\n';
    }
    hw::write_file((fs::path(out_dir) / "normalized.hyperedges").string(), normalized);

    if (stats.skipped_lines > 0 || stats.rejected_records > 0) {
        std::cerr << "error: " << (stats.skipped_lines + stats.rejected_records)
                  << " input records could not be parsed\n";
        return 2;
    }
    return 0;
}

int cmd_check_balance(const DatasetOpts& data, const PipelineOpts& pipe,
                      double tol_reversible, double tol_moderate_severe) {
    hw::LoadStats stats;
    const hw::Hypergraph h = load_dataset(data, &stats);
    report_warnings(stats);
    const hw::PipelineConfig config = to_pipeline_config(pipe);
    hw::BalanceThresholds thresholds{tol_reversible, tol_moderate_severe};

    fs::create_directories(pipe.out);
    const fs::path dir(pipe.out);
    write_run_config(dir, data, pipe);

    for (const hw::Method method : config.methods) {
        int reversible_folds = 0;
        double max_violation = 0.0, sum_fold_max = 0.0;
        std::int64_t total = 0, moderate = 0, severe = 0;
        for (int fold = 0; fold < config.folds; ++fold) {
            const hw::FoldSplit split = hw::split_train_probe(
                h, config.probe_fraction,
                hw::derive_seed(config.seed, {1, (std::uint64_t)fold}), fold);
            const hw::Hypergraph training = hw::restrict_edges(h, split.train);
            hw::TransitionMatrix transition;
            switch (method) {
                case hw::Method::markov:
                    transition = hw::markov_transition(hw::incidence_matrices(training));
                    break;
                case hw::Method::clique:
                    transition = hw::clique_transition(training);
                    break;
                case hw::Method::hyperwalk: {
                    // effective vertex-to-vertex kernel: time average of the
                    // estimated per-step transitions
                    const hw::StepTransitions steps = hw::hyperwalk_estimate(
                        training, config.n_walks, config.max_steps,
                        hw::derive_seed(config.seed, {3, (std::uint64_t)fold}),
                        config.threads);
                    const hw::SimilarityMatrix avg =
                        hw::similarity_avg(steps, config.max_steps);
                    transition.P = avg.S;
                    transition.ordering = avg.ordering;
                    break;
                }
            }
            const hw::Vector pi = hw::stationary(transition);
            const hw::BalanceReport report =
                hw::balance_report(transition, pi, thresholds, 1e-8);
            hw::write_file((dir / ("balance_" + hw::method_name(method) + "_fold" +
                                   std::to_string(fold) + ".json"))
                               .string(),
                           hw::to_json_string(report));
            if (pipe.dump_folds)
                hw::write_file((dir / ("transition_" + hw::method_name(method) + "_fold" +
                                       std::to_string(fold) + ".json"))
                                   .string(),
                               hw::to_json_string(transition));
            reversible_folds += report.reversible ? 1 : 0;
            max_violation = std::max(max_violation, report.max_violation);
            sum_fold_max += report.max_violation;
            total += report.total_violations;
            moderate += report.moderate_violations;
            severe += report.severe_violations;
        }
        std::string summary;
        summary += "{\n";
        summary += "  \"method\": \"" + hw::method_name(method) + "\",\n";
        summary += "  \"folds\": " + std::to_string(config.folds) + ",\n";
        summary += "  \"reversible_folds\": " + std::to_string(reversible_folds) + ",\n";
        summary += "  \"max_violation\": " + hw::format_double(max_violation) + ",\n";
        summary += "  \"mean_max_violation\": " +
                   hw::format_double(sum_fold_max / config.folds) + ",\n";
        summary += "  \"total_violations\": " + std::to_string(total) + ",\n";
        summary += "  \"moderate_violations\": " + std::to_string(moderate) + ",\n";
        summary += "  \"severe_violations\": " + std::to_string(severe) + "\n";
        summary += "}\n";
        hw::write_file((dir / ("balance_" + hw::method_name(method) + "_summary.json")).string(),
                       summary);
        std::cout << hw::method_name(method) << ": reversible " << reversible_folds << " / "
                  << config.folds << ", max violation " << hw::format_double(max_violation)
                  << "\n";
    }
    return 0;
}

int cmd_detect(const DatasetOpts& data, const PipelineOpts& pipe) {
    hw::LoadStats stats;
    const hw::Hypergraph h = load_dataset(data, &stats);
    report_warnings(stats);
    const hw::PipelineConfig config = to_pipeline_config(pipe);

    fs::create_directories(pipe.out);
    const fs::path dir(pipe.out);
    write_run_config(dir, data, pipe);

    const hw::DetectionReport report = hw::run_detection(h, config);
    hw::write_file((dir / "detection.csv").string(), hw::detection_csv(report));
    hw::write_file((dir / "detection.json").string(), hw::to_json_string(report));
    const hw::GapCurves curves = hw::gap_over_steps(h, config);
    hw::write_file((dir / "gaps.tsv").string(), hw::gap_tsv(curves));
    if (pipe.dump_folds) dump_fold_files(dir, h, config, /*with_negatives=*/true);

    for (std::size_t m = 0; m < report.methods.size(); ++m)
        for (std::size_t b = 0; b < report.bins.size(); ++b)
            if (auto agg = report.aggregate(m, b))
                std::cout << hw::method_name(report.methods[m]) << " " << bin_label(report.bins[b])
                          << " auc " << hw::format_double(agg->mean) << " +- "
                          << hw::format_double(agg->stddev) << "\n";
    return 0;
}

int cmd_predict(const DatasetOpts& data, const PipelineOpts& pipe, const hw::GuessConfig& guess) {
    hw::LoadStats stats;
    const hw::Hypergraph h = load_dataset(data, &stats);
    report_warnings(stats);
    hw::PredictionConfig config;
    config.pipeline = to_pipeline_config(pipe);
    config.guess = guess;

    fs::create_directories(pipe.out);
    const fs::path dir(pipe.out);
    write_run_config(dir, data, pipe);

    const hw::PredictionReport report = hw::run_prediction(h, config);
    hw::write_file((dir / "prediction.csv").string(), hw::prediction_csv(report));
    hw::write_file((dir / "prediction.json").string(), hw::to_json_string(report));
    if (pipe.dump_folds) dump_fold_files(dir, h, config.pipeline, /*with_negatives=*/false);

    using Cat = hw::PredictionReport::Category;
    for (std::size_t m = 0; m < report.method_names.size(); ++m)
        for (std::size_t b = 0; b < report.bins.size(); ++b)
            if (auto agg = report.ratio(m, b, Cat::overall))
                std::cout << report.method_names[m] << " " << bin_label(report.bins[b])
                          << " overall " << hw::format_double(agg->mean) << " +- "
                          << hw::format_double(agg->stddev) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random walks on EDVW hypergraphs: ingestion, balance diagnostics, "
                 "fake-hyperedge detection, and hyperedge prediction"};
    app.require_subcommand(1);

    DatasetOpts data;
    PipelineOpts pipe;
    hw::GuessConfig guess;
    double tol_reversible = 1e-10;
    double tol_moderate_severe = 1e-4;
    std::string ingest_out = ".";
    std::string config_path;

    OptionRegistry ingest_reg, balance_reg, detect_reg, predict_reg;

    CLI::App* ingest = app.add_subcommand("ingest", "Summarize and normalize a dataset");
    ingest->add_option("--config", config_path, "Read options from a key=value file");
    add_dataset_flags(ingest, ingest_reg, data);
    reg(ingest, ingest_reg, "--out", ingest_out, "Output directory");

    CLI::App* balance =
        app.add_subcommand("check-balance", "Detailed-balance diagnostics per fold");
    balance->add_option("--config", config_path, "Read options from a key=value file");
    add_dataset_flags(balance, balance_reg, data);
    add_pipeline_flags(balance, balance_reg, pipe);
    reg(balance, balance_reg, "--tol-reversible", tol_reversible, "Reversibility threshold");
    reg(balance, balance_reg, "--tol-moderate-severe", tol_moderate_severe,
        "Moderate/severe violation threshold");

    CLI::App* detect = app.add_subcommand("detect", "Fake-hyperedge detection benchmark");
    detect->add_option("--config", config_path, "Read options from a key=value file");
    add_dataset_flags(detect, detect_reg, data);
    add_pipeline_flags(detect, detect_reg, pipe);

    CLI::App* predict = app.add_subcommand("predict", "Hyperedge prediction benchmark");
    predict->add_option("--config", config_path, "Read options from a key=value file");
    add_dataset_flags(predict, predict_reg, data);
    add_pipeline_flags(predict, predict_reg, pipe);
    reg(predict, predict_reg, "--trials", guess.trials, "Deletion draws per probe");
    reg(predict, predict_reg, "--passes", guess.n_passes, "Refinement passes");
    reg(predict, predict_reg, "--patience", guess.patience,
        "Non-improving passes before stopping");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) {
            if (ingest->parsed()) ingest_reg.apply(config_path);
            if (balance->parsed()) balance_reg.apply(config_path);
            if (detect->parsed()) detect_reg.apply(config_path);
            if (predict->parsed()) predict_reg.apply(config_path);
        }
        if (data.dataset.empty()) {
            std::cerr << "error: --dataset is required\n";
            return 2;
        }
        if (ingest->parsed()) return cmd_ingest(data, ingest_out);
        if (balance->parsed())
            return cmd_check_balance(data, pipe, tol_reversible, tol_moderate_severe);
        if (detect->parsed()) return cmd_detect(data, pipe);
        if (predict->parsed()) return cmd_predict(data, pipe, guess);
    } catch (const hw::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hw::FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
