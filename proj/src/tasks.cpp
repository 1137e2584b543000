#include "hyperwalk/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "hyperwalk/parallel.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

double auc(const std::vector<double>& true_scores, const std::vector<double>& fake_scores) {
    if (true_scores.empty() || fake_scores.empty())
        throw InvalidArgument("auc: score lists must be non-empty");
    std::vector<double> fakes = fake_scores;
    std::sort(fakes.begin(), fakes.end());
    std::int64_t wins = 0, ties = 0;
    for (double t : true_scores) {
        const auto lo = std::lower_bound(fakes.begin(), fakes.end(), t);
        const auto hi = std::upper_bound(lo, fakes.end(), t);
        wins += lo - fakes.begin();
        ties += hi - lo;
    }
    const double n = static_cast<double>(true_scores.size()) * static_cast<double>(fakes.size());
    return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) / n;
}

std::vector<SizeBin> parse_bins(const std::string& spec) {
    std::vector<SizeBin> bins;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto dash = item.find('-');
        if (dash == std::string::npos || dash == 0)
            throw InvalidArgument("parse_bins: bad range '" + item + "'");
        SizeBin bin;
        try {
            bin.lo = std::stoi(item.substr(0, dash));
            const std::string hi = item.substr(dash + 1);
            bin.hi = hi.empty() ? -1 : std::stoi(hi);
        } catch (const std::exception&) {
            throw InvalidArgument("parse_bins: bad range '" + item + "'");
        }
        if (bin.lo < 2 || (bin.hi >= 0 && bin.hi < bin.lo))
            throw InvalidArgument("parse_bins: bad range '" + item + "'");
        bins.push_back(bin);
    }
    if (bins.empty()) throw InvalidArgument("parse_bins: empty spec");
    // bins must partition sizes: disjoint and ascending
    for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
        if (bins[i].hi < 0 || bins[i + 1].lo <= bins[i].hi)
            throw InvalidArgument("parse_bins: ranges overlap or are out of order");
    }
    return bins;
}

std::string bin_label(const SizeBin& bin) {
    return std::to_string(bin.lo) + "-" + (bin.hi < 0 ? std::string() : std::to_string(bin.hi));
}

std::string method_name(Method m) {
    switch (m) {
        case Method::markov: return "markov";
        case Method::clique: return "clique";
        case Method::hyperwalk: return "hyperwalk";
    }
    throw InvalidArgument("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
    if (name == "markov") return Method::markov;
    if (name == "clique") return Method::clique;
    if (name == "hyperwalk") return Method::hyperwalk;
    throw InvalidArgument("unknown method '" + name + "' (expected markov|clique|hyperwalk)");
}

namespace {

// Stream labels under the master seed; each pipeline stage draws from its
// own derived stream so stages stay independent of each other.
constexpr std::uint64_t kSplitStage = 1;
constexpr std::uint64_t kNegativeStage = 2;
constexpr std::uint64_t kWalkStage = 3;
constexpr std::uint64_t kPairStage = 4;
constexpr std::uint64_t kDeleteStage = 6;
constexpr std::uint64_t kRandomGuessStage = 7;

std::vector<SizeBin> bins_or_default(const PipelineConfig& config) {
    if (!config.bins.empty()) return config.bins;
    return {SizeBin{2, -1}};
}

void check_pipeline(const Hypergraph& h, const PipelineConfig& config) {
    if (config.folds < 1) throw InvalidArgument("pipeline: folds must be >= 1");
    if (config.max_steps < 1) throw InvalidArgument("pipeline: max_steps must be >= 1");
    if (config.methods.empty()) throw InvalidArgument("pipeline: no methods selected");
    if (!is_connected(h)) throw InvalidArgument("pipeline: hypergraph is disconnected");
}

NegativeSet make_negatives(const Hypergraph& h, const std::vector<EdgeId>& probes,
                           const PipelineConfig& config, std::uint64_t seed) {
    switch (config.sampler) {
        case SamplerKind::alpha: return sample_alpha(h, probes, config.alpha, seed);
        case SamplerKind::k_replace: return sample_k_replace(h, probes, config.k_substitute, seed);
        case SamplerKind::degree_matched:
            return sample_degree_matched(h, probes, config.k_substitute, seed);
    }
    throw InvalidArgument("pipeline: unknown sampler");
}

// Yields P^1, P^2, ... for analytic walks or the estimated per-step
// matrices for the hyperwalk.
class StepSource {
public:
    explicit StepSource(TransitionMatrix t) : base_(std::move(t.P)) {}
    explicit StepSource(StepTransitions t) : empirical_(std::move(t.steps)) {}

    const Matrix& advance() {
        ++step_;
        if (!empirical_.empty()) {
            if (step_ > static_cast<int>(empirical_.size()))
                throw InvalidArgument("StepSource: step beyond estimated horizon");
            return empirical_[step_ - 1];
        }
        power_ = step_ == 1 ? base_ : Matrix(power_ * base_);
        return power_;
    }

private:
    Matrix base_;
    Matrix power_;
    std::vector<Matrix> empirical_;
    int step_ = 0;
};

StepSource make_step_source(const Hypergraph& training, Method method,
                            const PipelineConfig& config, std::uint64_t walk_seed) {
    switch (method) {
        case Method::markov: return StepSource(markov_transition(incidence_matrices(training)));
        case Method::clique: return StepSource(clique_transition(training));
        case Method::hyperwalk:
            return StepSource(hyperwalk_estimate(training, config.n_walks, config.max_steps,
                                                 walk_seed, /*threads=*/1));
    }
    throw InvalidArgument("pipeline: unknown method");
}

std::vector<double> score_sets(const Matrix& s, const std::vector<std::vector<NodeId>>& sets) {
    std::vector<double> out(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) out[i] = hyperedge_score(s, sets[i]);
    return out;
}

// (true index, fake index) pairs for one bin; exhaustive when the cross
// product fits the sample budget.
struct BinPairs {
    bool exhaustive = true;
    std::vector<std::pair<std::int32_t, std::int32_t>> sampled;
    std::int64_t n_pairs = 0;
};

BinPairs make_bin_pairs(std::size_t n_true, std::size_t n_fake, int n_samples, RngStream& rng) {
    BinPairs out;
    const std::int64_t total =
        static_cast<std::int64_t>(n_true) * static_cast<std::int64_t>(n_fake);
    if (total <= n_samples) {
        out.exhaustive = true;
        out.n_pairs = total;
        return out;
    }
    out.exhaustive = false;
    out.n_pairs = n_samples;
    std::unordered_set<std::int64_t> codes;
    codes.reserve(static_cast<std::size_t>(n_samples) * 2);
    std::vector<std::int64_t> ordered;
    ordered.reserve(n_samples);
    while (ordered.size() < static_cast<std::size_t>(n_samples)) {
        const std::int64_t code = static_cast<std::int64_t>(rng.uniform_index(total));
        if (codes.insert(code).second) ordered.push_back(code);
    }
    out.sampled.reserve(n_samples);
    for (std::int64_t code : ordered)
        out.sampled.emplace_back(static_cast<std::int32_t>(code / static_cast<std::int64_t>(n_fake)),
                                 static_cast<std::int32_t>(code % static_cast<std::int64_t>(n_fake)));
    return out;
}

double auc_over_pairs(const std::vector<double>& true_scores,
                      const std::vector<double>& fake_scores, const BinPairs& pairs) {
    if (pairs.exhaustive) return auc(true_scores, fake_scores);
    std::int64_t wins = 0, ties = 0;
    for (const auto& [ti, fi] : pairs.sampled) {
        const double t = true_scores[ti];
        const double f = fake_scores[fi];
        if (t > f)
            ++wins;
        else if (t == f)
            ++ties;
    }
    return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) /
           static_cast<double>(pairs.sampled.size());
}

struct FoldData {
    FoldSplit split;
    Hypergraph training;
    std::vector<std::vector<NodeId>> true_sets;
    std::vector<std::vector<NodeId>> fake_sets;
};

FoldData build_fold(const Hypergraph& h, const PipelineConfig& config, int fold) {
    FoldData data;
    data.split = split_train_probe(h, config.probe_fraction,
                                   derive_seed(config.seed, {kSplitStage, (std::uint64_t)fold}),
                                   fold);
    data.training = restrict_edges(h, data.split.train);
    if (data.training.node_count() != h.node_count())
        throw Error("pipeline: training split dropped nodes despite connectivity check");
    NegativeSet negatives = make_negatives(
        h, data.split.probe, config, derive_seed(config.seed, {kNegativeStage, (std::uint64_t)fold}));
    data.true_sets.reserve(data.split.probe.size());
    for (EdgeId e : data.split.probe) data.true_sets.push_back(h.sorted_members(e));
    data.fake_sets.reserve(negatives.fakes.size());
    for (auto& fake : negatives.fakes) data.fake_sets.push_back(fake.members);
    return data;
}

}  // namespace

std::optional<Aggregate> DetectionReport::aggregate(std::size_t method, std::size_t bin) const {
    std::vector<double> values;
    for (const auto& cell : cells.at(method).at(bin))
        if (cell) values.push_back(cell->auc_value);
    if (values.empty()) return std::nullopt;
    Aggregate agg;
    agg.folds = static_cast<int>(values.size());
    agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.stddev = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
    return agg;
}

DetectionReport run_detection(const Hypergraph& h, const PipelineConfig& config) {
    check_pipeline(h, config);
    const std::vector<SizeBin> bins = bins_or_default(config);

    DetectionReport report;
    report.methods = config.methods;
    report.bins = bins;
    report.folds = config.folds;
    report.n_auc_samples = config.n_auc_samples;
    report.seed = config.seed;
    report.cells.assign(config.methods.size(),
                        std::vector<std::vector<std::optional<DetectionCell>>>(
                            bins.size(), std::vector<std::optional<DetectionCell>>(config.folds)));

    parallel_for(static_cast<std::size_t>(config.folds), config.threads,
                 [&](std::size_t begin, std::size_t end) {
        for (std::size_t fold = begin; fold < end; ++fold) {
            const FoldData data = build_fold(h, config, static_cast<int>(fold));

            // per-bin membership of probes and fakes
            std::vector<std::vector<std::int32_t>> bin_true(bins.size()), bin_fake(bins.size());
            for (std::size_t i = 0; i < data.true_sets.size(); ++i)
                for (std::size_t b = 0; b < bins.size(); ++b)
                    if (bins[b].contains(data.true_sets[i].size()))
                        bin_true[b].push_back(static_cast<std::int32_t>(i));
            for (std::size_t i = 0; i < data.fake_sets.size(); ++i)
                for (std::size_t b = 0; b < bins.size(); ++b)
                    if (bins[b].contains(data.fake_sets[i].size()))
                        bin_fake[b].push_back(static_cast<std::int32_t>(i));

            std::vector<BinPairs> pairs(bins.size());
            for (std::size_t b = 0; b < bins.size(); ++b) {
                if (bin_true[b].empty() || bin_fake[b].empty()) continue;
                RngStream rng(config.seed, {kPairStage, fold, (std::uint64_t)b});
                pairs[b] = make_bin_pairs(bin_true[b].size(), bin_fake[b].size(),
                                          config.n_auc_samples, rng);
            }

            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                StepSource source = make_step_source(
                    data.training, config.methods[m], config,
                    derive_seed(config.seed, {kWalkStage, fold, (std::uint64_t)m}));
                Matrix acc;
                std::vector<std::optional<DetectionCell>> best(bins.size());
                for (int step = 1; step <= config.max_steps; ++step) {
                    const Matrix& pk = source.advance();
                    if (step == 1)
                        acc = pk;
                    else
                        acc += pk;
                    const Matrix s = acc / static_cast<double>(step);
                    const std::vector<double> true_scores = score_sets(s, data.true_sets);
                    const std::vector<double> fake_scores = score_sets(s, data.fake_sets);
                    for (std::size_t b = 0; b < bins.size(); ++b) {
                        if (bin_true[b].empty() || bin_fake[b].empty()) continue;
                        std::vector<double> t, f;
                        t.reserve(bin_true[b].size());
                        f.reserve(bin_fake[b].size());
                        for (auto i : bin_true[b]) t.push_back(true_scores[i]);
                        for (auto i : bin_fake[b]) f.push_back(fake_scores[i]);
                        const double value = auc_over_pairs(t, f, pairs[b]);
                        if (!best[b] || value > best[b]->auc_value) {
                            DetectionCell cell;
                            cell.auc_value = value;
                            cell.best_step = step;
                            cell.n_true = static_cast<int>(t.size());
                            cell.n_fake = static_cast<int>(f.size());
                            cell.n_pairs = pairs[b].n_pairs;
                            best[b] = cell;
                        }
                    }
                }
                for (std::size_t b = 0; b < bins.size(); ++b)
                    report.cells[m][b][fold] = best[b];
            }
        }
    });
    return report;
}

GapCurves gap_over_steps(const Hypergraph& h, const PipelineConfig& config) {
    check_pipeline(h, config);
    GapCurves curves;
    curves.methods = config.methods;
    // per-fold gaps, reduced serially afterwards
    std::vector<std::vector<std::vector<double>>> fold_gap(
        config.folds, std::vector<std::vector<double>>(
                          config.methods.size(), std::vector<double>(config.max_steps, 0.0)));

    parallel_for(static_cast<std::size_t>(config.folds), config.threads,
                 [&](std::size_t begin, std::size_t end) {
        for (std::size_t fold = begin; fold < end; ++fold) {
            const FoldData data = build_fold(h, config, static_cast<int>(fold));
            if (data.true_sets.empty() || data.fake_sets.empty())
                throw InvalidArgument("gap_over_steps: fold " + std::to_string(fold) +
                                      " produced no probes or no fakes");
            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                StepSource source = make_step_source(
                    data.training, config.methods[m], config,
                    derive_seed(config.seed, {kWalkStage, fold, (std::uint64_t)m}));
                for (int step = 1; step <= config.max_steps; ++step) {
                    const Matrix& s_k = source.advance();
                    double true_mean = 0.0, fake_mean = 0.0;
                    for (const auto& set : data.true_sets) true_mean += hyperedge_score(s_k, set);
                    for (const auto& set : data.fake_sets) fake_mean += hyperedge_score(s_k, set);
                    true_mean /= static_cast<double>(data.true_sets.size());
                    fake_mean /= static_cast<double>(data.fake_sets.size());
                    fold_gap[fold][m][step - 1] = true_mean - fake_mean;
                }
            }
        }
    });

    curves.gap.assign(config.methods.size(), std::vector<double>(config.max_steps, 0.0));
    for (std::size_t m = 0; m < config.methods.size(); ++m)
        for (int k = 0; k < config.max_steps; ++k) {
            double sum = 0.0;
            for (int f = 0; f < config.folds; ++f) sum += fold_gap[f][m][k];
            curves.gap[m][k] = sum / static_cast<double>(config.folds);
        }
    return curves;
}

// ---------------------------------------------------------------------------
// Exponential fit and intruder regression

ExpFit fit_exponential(const std::vector<double>& y, std::vector<double> x) {
    const std::size_t n = y.size();
    if (n < 4) throw InvalidArgument("fit_exponential: need at least 4 points");
    if (x.empty()) {
        x.resize(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
    }
    if (x.size() != n) throw InvalidArgument("fit_exponential: x/y size mismatch");

    // init: c0 = min(y); log-linear regression of y - c0 where positive
    double c = *std::min_element(y.begin(), y.end());
    double a = 0.0, b = 0.0;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - c;
            if (d <= 0.0) continue;
            const double ly = std::log(d);
            sx += x[i];
            sy += ly;
            sxx += x[i] * x[i];
            sxy += x[i] * ly;
            ++count;
        }
        if (count >= 2) {
            const double denom = count * sxx - sx * sx;
            if (denom != 0.0) {
                b = (count * sxy - sx * sy) / denom;
                a = std::exp((sy - b * sx) / count);
            }
        }
    }

    auto sse_of = [&](double pa, double pb, double pc) {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = pa * std::exp(pb * x[i]) + pc - y[i];
            sse += r * r;
        }
        return sse;
    };

    double sse = sse_of(a, b, c);
    double lambda = 1e-3;
    int iterations = 0;
    for (; iterations < 500; ++iterations) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(b * x[i]);
            const double r = a * e + c - y[i];
            const Eigen::Vector3d j(e, a * x[i] * e, 1.0);
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Matrix3d damped = jtj;
        for (int d = 0; d < 3; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
        const Eigen::Vector3d delta = damped.ldlt().solve(-jtr);
        const double ta = a + delta[0], tb = b + delta[1], tc = c + delta[2];
        const double trial = sse_of(ta, tb, tc);
        if (std::isfinite(trial) && trial < sse) {
            const double change = sse - trial;
            a = ta;
            b = tb;
            c = tc;
            sse = trial;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (change <= 1e-10 * std::max(sse, 1e-30)) break;
        } else {
            lambda *= 3.0;
            if (lambda > 1e14) break;  // stalled; current params are the fit
        }
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw FitError("fit_exponential: non-finite parameters");

    ExpFit fit;
    fit.a = a;
    fit.b = b;
    fit.c = c;
    fit.residual = sse;
    fit.iterations = iterations;
    if (n > 3) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(b * x[i]);
            const Eigen::Vector3d j(e, a * x[i] * e, 1.0);
            jtj += j * j.transpose();
        }
        Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
        if (lu.isInvertible()) {
            const Eigen::Matrix3d cov = lu.inverse() * (sse / static_cast<double>(n - 3));
            fit.stderr_a = std::sqrt(std::max(cov(0, 0), 0.0));
            fit.stderr_b = std::sqrt(std::max(cov(1, 1), 0.0));
            fit.stderr_c = std::sqrt(std::max(cov(2, 2), 0.0));
        }
    }
    return fit;
}

IntruderLine intruder_line(const std::vector<std::pair<double, ExpFit>>& fits) {
    std::vector<double> xs, ys;
    for (const auto& [count, fit] : fits) {
        xs.push_back(count);
        ys.push_back(fit.a);
    }
    std::vector<double> distinct = xs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw InvalidArgument("intruder_line: need >= 3 distinct intruder counts");

    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("intruder_line: degenerate x variance");
    IntruderLine line;
    line.slope = sxy / sxx;
    line.intercept = my - line.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (line.intercept + line.slope * xs[i]);
        ss_res += r * r;
    }
    line.r_squared = syy == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / syy;
    return line;
}

int predict_intruders(const IntruderLine& line, double a_query) {
    if (line.slope == 0.0) throw InvalidArgument("predict_intruders: zero slope");
    return static_cast<int>(std::llround((a_query - line.intercept) / line.slope));
}

IntruderAnalysis run_intruder_analysis(const Hypergraph& h, const PipelineConfig& config,
                                       const std::vector<int>& intruder_counts) {
    if (intruder_counts.size() < 3)
        throw InvalidArgument("run_intruder_analysis: need >= 3 intruder counts");
    IntruderAnalysis analysis;
    analysis.counts = intruder_counts;
    analysis.methods = config.methods;
    analysis.fits.assign(config.methods.size(), {});
    for (int count : intruder_counts) {
        PipelineConfig variant = config;
        variant.sampler = SamplerKind::k_replace;
        variant.k_substitute = count;
        const GapCurves curves = gap_over_steps(h, variant);
        for (std::size_t m = 0; m < config.methods.size(); ++m)
            analysis.fits[m].push_back(fit_exponential(curves.gap[m]));
    }
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
        std::vector<std::pair<double, ExpFit>> fits;
        for (std::size_t i = 0; i < intruder_counts.size(); ++i)
            fits.emplace_back(static_cast<double>(intruder_counts[i]), analysis.fits[m][i]);
        analysis.lines.push_back(intruder_line(fits));
    }
    return analysis;
}

// ---------------------------------------------------------------------------
// Hyperedge prediction

namespace {

std::vector<NodeId> greedy_fill(const std::vector<NodeId>& preserved,
                                const std::vector<NodeId>& must_keep, int n,
                                const std::vector<SimilarityMatrix>& s_steps,
                                const std::vector<NodeId>& pool) {
    std::vector<NodeId> chosen = must_keep;
    std::unordered_set<NodeId> used(preserved.begin(), preserved.end());
    for (NodeId v : must_keep) used.insert(v);
    std::vector<NodeId> members(preserved);
    members.insert(members.end(), must_keep.begin(), must_keep.end());
    const int last = static_cast<int>(s_steps.size()) - 1;
    for (int t = 1; t <= n; ++t) {
        const Matrix& s = s_steps[static_cast<std::size_t>(std::min(t, last))].S;
        NodeId best_node = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        members.push_back(-1);  // candidate slot
        for (NodeId j : pool) {
            if (used.count(j)) continue;
            members.back() = j;
            const double score = hyperedge_score(s, members);
            if (score > best_score) {
                best_score = score;
                best_node = j;
            }
        }
        if (best_node < 0) {
            members.pop_back();
            break;  // pool exhausted; return the partial guess
        }
        members.back() = best_node;
        chosen.push_back(best_node);
        used.insert(best_node);
    }
    return chosen;
}

}  // namespace

std::vector<NodeId> guess_with_refinement(const std::vector<NodeId>& preserved, int missing,
                                          const std::vector<SimilarityMatrix>& s_steps,
                                          const std::vector<NodeId>& pool,
                                          const GuessConfig& config) {
    if (missing < 0) throw InvalidArgument("guess_with_refinement: negative missing count");
    if (missing == 0) return {};
    if (preserved.empty()) throw InvalidArgument("guess_with_refinement: empty preserved set");
    if (s_steps.empty()) throw InvalidArgument("guess_with_refinement: empty step list");

    std::vector<NodeId> guessed = greedy_fill(preserved, {}, missing, s_steps, pool);
    if (guessed.empty()) return guessed;

    const Matrix& s_last = s_steps.back().S;
    auto score_with = [&](const std::vector<NodeId>& extra) {
        std::vector<NodeId> members(preserved);
        members.insert(members.end(), extra.begin(), extra.end());
        return hyperedge_score(s_last, members);
    };

    double best = score_with(guessed);
    int no_improvement = 0;
    for (int pass = 1; pass <= config.n_passes; ++pass) {
        if (guessed.empty()) break;
        const NodeId pivot = guessed[static_cast<std::size_t>((pass - 1) % guessed.size())];
        const int refill = std::max(0, missing - 1);
        std::vector<NodeId> candidate = greedy_fill(preserved, {pivot}, refill, s_steps, pool);
        const double score = score_with(candidate);
        if (score > best) {
            guessed = std::move(candidate);
            best = score;
            no_improvement = 0;
        } else {
            ++no_improvement;
            if (config.early_stop && no_improvement >= config.patience) break;
        }
    }
    return guessed;
}

std::optional<Aggregate> PredictionReport::ratio(std::size_t method, std::size_t bin,
                                                 Category cat) const {
    std::vector<double> values;
    for (const auto& cell : cells.at(method).at(bin)) {
        if (!cell) continue;
        std::int64_t correct = 0, max = 0;
        switch (cat) {
            case Category::overall: correct = cell->correct_overall; max = cell->max_overall; break;
            case Category::seen: correct = cell->correct_seen; max = cell->max_seen; break;
            case Category::novel: correct = cell->correct_novel; max = cell->max_novel; break;
        }
        if (max > 0) values.push_back(static_cast<double>(correct) / static_cast<double>(max));
    }
    if (values.empty()) return std::nullopt;
    Aggregate agg;
    agg.folds = static_cast<int>(values.size());
    agg.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.stddev = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
    return agg;
}

PredictionReport run_prediction(const Hypergraph& h, const PredictionConfig& config) {
    const PipelineConfig& pipe = config.pipeline;
    check_pipeline(h, pipe);
    if (config.guess.trials < 1) throw InvalidArgument("run_prediction: trials must be >= 1");
    const std::vector<SizeBin> bins = bins_or_default(pipe);

    PredictionReport report;
    for (Method m : pipe.methods) report.method_names.push_back(method_name(m));
    report.method_names.push_back("random");
    report.bins = bins;
    report.folds = pipe.folds;
    report.seed = pipe.seed;
    const std::size_t n_rows = report.method_names.size();
    report.cells.assign(n_rows, std::vector<std::vector<std::optional<PredictionCell>>>(
                                    bins.size(),
                                    std::vector<std::optional<PredictionCell>>(pipe.folds)));

    parallel_for(static_cast<std::size_t>(pipe.folds), pipe.threads,
                 [&](std::size_t begin, std::size_t end) {
        for (std::size_t fold = begin; fold < end; ++fold) {
            const std::uint64_t fold_u = fold;
            FoldSplit split = split_train_probe(
                h, pipe.probe_fraction, derive_seed(pipe.seed, {kSplitStage, fold_u}),
                static_cast<int>(fold));
            Hypergraph training = restrict_edges(h, split.train);
            if (training.node_count() != h.node_count())
                throw Error("pipeline: training split dropped nodes despite connectivity check");

            std::vector<std::vector<SimilarityMatrix>> steps_per_method;
            steps_per_method.reserve(pipe.methods.size());
            for (std::size_t m = 0; m < pipe.methods.size(); ++m) {
                switch (pipe.methods[m]) {
                    case Method::markov:
                        steps_per_method.push_back(similarity_steps(
                            markov_transition(incidence_matrices(training)), pipe.max_steps));
                        break;
                    case Method::clique:
                        steps_per_method.push_back(
                            similarity_steps(clique_transition(training), pipe.max_steps));
                        break;
                    case Method::hyperwalk:
                        steps_per_method.push_back(similarity_steps(
                            hyperwalk_estimate(training, pipe.n_walks, pipe.max_steps,
                                               derive_seed(pipe.seed, {kWalkStage, fold_u, m}),
                                               /*threads=*/1),
                            pipe.max_steps));
                        break;
                }
            }

            // accumulation grid [row][bin]
            std::vector<std::vector<PredictionCell>> acc(
                n_rows, std::vector<PredictionCell>(bins.size()));
            std::vector<std::vector<bool>> touched(n_rows,
                                                   std::vector<bool>(bins.size(), false));

            auto is_seen = [&](std::vector<NodeId> key) {
                std::sort(key.begin(), key.end());
                for (EdgeId e : training.incident_edges(key[0])) {
                    const auto& sup = training.sorted_members(e);
                    if (sup.size() < key.size()) continue;
                    if (std::includes(sup.begin(), sup.end(), key.begin(), key.end()))
                        return true;
                }
                return false;
            };

            auto account = [&](std::size_t row, std::size_t bin, int deleted_count,
                               std::int64_t correct, bool seen) {
                PredictionCell& cell = acc[row][bin];
                touched[row][bin] = true;
                cell.max_overall += deleted_count;
                cell.correct_overall += correct;
                if (seen) {
                    cell.max_seen += deleted_count;
                    cell.correct_seen += correct;
                } else {
                    cell.max_novel += deleted_count;
                    cell.correct_novel += correct;
                }
            };

            for (std::size_t pi = 0; pi < split.probe.size(); ++pi) {
                const EdgeId probe = split.probe[pi];
                const auto& members = h.members(probe);
                std::size_t bin_index = bins.size();
                for (std::size_t b = 0; b < bins.size(); ++b)
                    if (bins[b].contains(members.size())) {
                        bin_index = b;
                        break;
                    }
                if (bin_index == bins.size()) continue;

                for (int trial = 0; trial < config.guess.trials; ++trial) {
                    const int m_deleted =
                        alpha_replacement_count(members.size(), pipe.alpha);
                    RngStream delete_rng(pipe.seed, {kDeleteStage, fold_u, pi,
                                                     static_cast<std::uint64_t>(trial)});
                    const auto positions =
                        delete_rng.sample_without_replacement(members.size(), m_deleted);
                    std::vector<bool> is_deleted(members.size(), false);
                    for (std::size_t pos : positions) is_deleted[pos] = true;
                    std::vector<NodeId> preserved, deleted;
                    for (std::size_t i = 0; i < members.size(); ++i)
                        (is_deleted[i] ? deleted : preserved).push_back(members[i]);
                    std::sort(deleted.begin(), deleted.end());

                    std::vector<NodeId> pool;
                    pool.reserve(h.node_count() - preserved.size());
                    std::unordered_set<NodeId> preserved_set(preserved.begin(), preserved.end());
                    for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
                        if (!preserved_set.count(v)) pool.push_back(v);

                    for (std::size_t m = 0; m < pipe.methods.size(); ++m) {
                        const auto guessed = guess_with_refinement(
                            preserved, m_deleted, steps_per_method[m], pool, config.guess);
                        std::vector<NodeId> correct_nodes;
                        for (NodeId g : guessed)
                            if (std::binary_search(deleted.begin(), deleted.end(), g))
                                correct_nodes.push_back(g);
                        std::vector<NodeId> key(preserved);
                        key.insert(key.end(), correct_nodes.begin(), correct_nodes.end());
                        account(m, bin_index, m_deleted,
                                static_cast<std::int64_t>(correct_nodes.size()), is_seen(key));
                    }

                    // uniform-random baseline over the same pool
                    RngStream guess_rng(pipe.seed, {kRandomGuessStage, fold_u, pi,
                                                    static_cast<std::uint64_t>(trial)});
                    const auto random_positions = guess_rng.sample_without_replacement(
                        pool.size(), std::min<std::size_t>(m_deleted, pool.size()));
                    std::vector<NodeId> correct_nodes;
                    for (std::size_t pos : random_positions)
                        if (std::binary_search(deleted.begin(), deleted.end(), pool[pos]))
                            correct_nodes.push_back(pool[pos]);
                    std::vector<NodeId> key(preserved);
                    key.insert(key.end(), correct_nodes.begin(), correct_nodes.end());
                    account(n_rows - 1, bin_index, m_deleted,
                            static_cast<std::int64_t>(correct_nodes.size()), is_seen(key));
                }
            }

            for (std::size_t row = 0; row < n_rows; ++row)
                for (std::size_t b = 0; b < bins.size(); ++b)
                    if (touched[row][b]) report.cells[row][b][fold] = acc[row][b];
        }
    });
    return report;
}

}  // namespace hyperwalk
