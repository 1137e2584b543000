#include "hyperwalk/report_io.hpp"

#include <charconv>
#include <fstream>

#include <nlohmann/json.hpp>

namespace hyperwalk {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string to_json_string(const BalanceReport& report) {
    json j{{"reversible", report.reversible},
           {"max_violation", report.max_violation},
           {"mean_max_violation", report.mean_max_violation},
           {"total_violations", report.total_violations},
           {"moderate_violations", report.moderate_violations},
           {"severe_violations", report.severe_violations},
           {"thresholds",
            {{"tol_reversible", report.thresholds.tol_reversible},
             {"tol_moderate_severe", report.thresholds.tol_moderate_severe}}}};
    return j.dump(2);
}

std::string to_json_string(const TransitionMatrix& t) {
    json rows = json::array();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(t.P.size()));
    for (Eigen::Index i = 0; i < t.P.rows(); ++i)
        for (Eigen::Index j = 0; j < t.P.cols(); ++j) flat.push_back(t.P(i, j));
    json j{{"ordering", t.ordering},
           {"rows", t.P.rows()},
           {"cols", t.P.cols()},
           {"P", flat}};
    return j.dump();
}

std::string to_json_string(const FoldSplit& split, const Hypergraph& h) {
    json probe_members = json::array();
    for (EdgeId e : split.probe) {
        json edge = json::array();
        for (NodeId v : h.members(e)) edge.push_back(h.node_name(v));
        probe_members.push_back(std::move(edge));
    }
    json j{{"fold", split.fold_index},
           {"seed", split.seed},
           {"requested_fraction", split.requested_fraction},
           {"actual_fraction", split.actual_fraction},
           {"train", split.train},
           {"probe", split.probe},
           {"probe_members", probe_members}};
    return j.dump(2);
}

namespace {

const char* sampler_name(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::alpha: return "alpha";
        case SamplerKind::k_replace: return "k-replace";
        case SamplerKind::degree_matched: return "degree-matched";
    }
    return "unknown";
}

}  // namespace

std::string to_json_string(const NegativeSet& negatives, const Hypergraph& h) {
    json fakes = json::array();
    for (const auto& fake : negatives.fakes) {
        json members = json::array();
        for (NodeId v : fake.members) members.push_back(h.node_name(v));
        fakes.push_back({{"source_probe", fake.source_probe},
                         {"replaced", fake.replaced},
                         {"members", std::move(members)}});
    }
    json j{{"strategy", sampler_name(negatives.strategy)},
           {"alpha", negatives.alpha},
           {"k", negatives.k},
           {"fakes", std::move(fakes)},
           {"warnings", negatives.warnings}};
    return j.dump(2);
}

std::string to_json_string(const DetectionReport& report) {
    json results = json::array();
    for (std::size_t m = 0; m < report.methods.size(); ++m) {
        for (std::size_t b = 0; b < report.bins.size(); ++b) {
            json folds = json::array();
            for (int f = 0; f < report.folds; ++f) {
                const auto& cell = report.cells[m][b][f];
                if (!cell) continue;
                folds.push_back({{"fold", f},
                                 {"auc", cell->auc_value},
                                 {"best_step", cell->best_step},
                                 {"n_true", cell->n_true},
                                 {"n_fake", cell->n_fake},
                                 {"n_pairs", cell->n_pairs}});
            }
            if (folds.empty()) continue;
            json entry{{"method", method_name(report.methods[m])},
                       {"bin", bin_label(report.bins[b])},
                       {"folds", std::move(folds)}};
            if (auto agg = report.aggregate(m, b)) {
                entry["mean"] = agg->mean;
                entry["std"] = agg->stddev;
            }
            results.push_back(std::move(entry));
        }
    }
    json j{{"task", "detection"},
           {"folds", report.folds},
           {"n_auc_samples", report.n_auc_samples},
           {"seed", report.seed},
           {"results", std::move(results)}};
    return j.dump(2);
}

std::string to_json_string(const PredictionReport& report) {
    json results = json::array();
    for (std::size_t m = 0; m < report.method_names.size(); ++m) {
        for (std::size_t b = 0; b < report.bins.size(); ++b) {
            json folds = json::array();
            for (int f = 0; f < report.folds; ++f) {
                const auto& cell = report.cells[m][b][f];
                if (!cell) continue;
                folds.push_back({{"fold", f},
                                 {"correct_overall", cell->correct_overall},
                                 {"correct_seen", cell->correct_seen},
                                 {"correct_novel", cell->correct_novel},
                                 {"max_overall", cell->max_overall},
                                 {"max_seen", cell->max_seen},
                                 {"max_novel", cell->max_novel}});
            }
            if (folds.empty()) continue;
            json entry{{"method", report.method_names[m]},
                       {"bin", bin_label(report.bins[b])},
                       {"folds", std::move(folds)}};
            using Cat = PredictionReport::Category;
            const std::pair<Cat, const char*> cats[] = {
                {Cat::overall, "overall"}, {Cat::seen, "seen"}, {Cat::novel, "novel"}};
            for (const auto& [cat, name] : cats)
                if (auto agg = report.ratio(m, b, cat))
                    entry[name] = {{"mean", agg->mean}, {"std", agg->stddev}};
            results.push_back(std::move(entry));
        }
    }
    json j{{"task", "prediction"},
           {"folds", report.folds},
           {"seed", report.seed},
           {"results", std::move(results)}};
    return j.dump(2);
}

std::string detection_csv(const DetectionReport& report) {
    std::string out = "method,bin,fold,metric,value\n";
    for (std::size_t m = 0; m < report.methods.size(); ++m) {
        const std::string method = method_name(report.methods[m]);
        for (std::size_t b = 0; b < report.bins.size(); ++b) {
            const std::string bin = bin_label(report.bins[b]);
            for (int f = 0; f < report.folds; ++f) {
                const auto& cell = report.cells[m][b][f];
                if (!cell) continue;
                out += method + "," + bin + "," + std::to_string(f) + ",auc," +
                       format_double(cell->auc_value) + "\n";
                out += method + "," + bin + "," + std::to_string(f) + ",best_step," +
                       std::to_string(cell->best_step) + "\n";
            }
            if (auto agg = report.aggregate(m, b)) {
                out += method + "," + bin + ",mean,auc," + format_double(agg->mean) + "\n";
                out += method + "," + bin + ",std,auc," + format_double(agg->stddev) + "\n";
            }
        }
    }
    return out;
}

std::string prediction_csv(const PredictionReport& report) {
    std::string out = "method,bin,fold,metric,value\n";
    using Cat = PredictionReport::Category;
    for (std::size_t m = 0; m < report.method_names.size(); ++m) {
        const std::string& method = report.method_names[m];
        for (std::size_t b = 0; b < report.bins.size(); ++b) {
            const std::string bin = bin_label(report.bins[b]);
            for (int f = 0; f < report.folds; ++f) {
                const auto& cell = report.cells[m][b][f];
                if (!cell) continue;
                const std::string prefix = method + "," + bin + "," + std::to_string(f) + ",";
                out += prefix + "correct_overall," + std::to_string(cell->correct_overall) + "\n";
                out += prefix + "correct_seen," + std::to_string(cell->correct_seen) + "\n";
                out += prefix + "correct_novel," + std::to_string(cell->correct_novel) + "\n";
                out += prefix + "max_overall," + std::to_string(cell->max_overall) + "\n";
                out += prefix + "max_seen," + std::to_string(cell->max_seen) + "\n";
                out += prefix + "max_novel," + std::to_string(cell->max_novel) + "\n";
                if (cell->max_overall > 0)
                    out += prefix + "overall_ratio," +
                           format_double(static_cast<double>(cell->correct_overall) /
                                         static_cast<double>(cell->max_overall)) +
                           "\n";
                if (cell->max_seen > 0)
                    out += prefix + "seen_ratio," +
                           format_double(static_cast<double>(cell->correct_seen) /
                                         static_cast<double>(cell->max_seen)) +
                           "\n";
                if (cell->max_novel > 0)
                    out += prefix + "novel_ratio," +
                           format_double(static_cast<double>(cell->correct_novel) /
                                         static_cast<double>(cell->max_novel)) +
                           "\n";
            }
            const std::pair<Cat, const char*> cats[] = {
                {Cat::overall, "overall_ratio"}, {Cat::seen, "seen_ratio"},
                {Cat::novel, "novel_ratio"}};
            for (const auto& [cat, metric] : cats) {
                if (auto agg = report.ratio(m, b, cat)) {
                    out += method + "," + bin + ",mean," + metric + "," +
                           format_double(agg->mean) + "\n";
                    out += method + "," + bin + ",std," + metric + "," +
                           format_double(agg->stddev) + "\n";
                }
            }
        }
    }
    return out;
}

std::string gap_tsv(const GapCurves& curves) {
    std::string out = "step\tmethod\tgap\n";
    for (std::size_t m = 0; m < curves.methods.size(); ++m) {
        const std::string method = method_name(curves.methods[m]);
        for (std::size_t k = 0; k < curves.gap[m].size(); ++k)
            out += std::to_string(k + 1) + "\t" + method + "\t" +
                   format_double(curves.gap[m][k]) + "\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
    if (!out) throw Error("failed while writing file: " + path);
}

}  // namespace hyperwalk
