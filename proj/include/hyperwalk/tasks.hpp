#ifndef HYPERWALK_TASKS_HPP
#define HYPERWALK_TASKS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperwalk/hypergraph.hpp"
#include "hyperwalk/sampling.hpp"
#include "hyperwalk/scoring.hpp"
#include "hyperwalk/walks.hpp"

namespace hyperwalk {

/// Tie-aware pairwise AUC: over all pairs of one true and one fake score,
/// (wins + 0.5 * ties) / pairs. Throws on an empty list.
double auc(const std::vector<double>& true_scores, const std::vector<double>& fake_scores);

/// Inclusive hyperedge-size range; hi < 0 means unbounded above.
struct SizeBin {
    int lo = 2;
    int hi = -1;

    bool contains(std::size_t size) const {
        const int s = static_cast<int>(size);
        return s >= lo && (hi < 0 || s <= hi);
    }
};

/// Parses a bin spec like "3-6,7-10,11-" (open upper bound on the last).
std::vector<SizeBin> parse_bins(const std::string& spec);
std::string bin_label(const SizeBin& bin);

enum class Method { markov, clique, hyperwalk };
std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Shared pipeline configuration; defaults follow the evaluation protocol
/// (10 folds, 10% probes, alpha = 0.5, k = 2, N = 10000 walks).
struct PipelineConfig {
    int folds = 10;
    double probe_fraction = 0.1;
    SamplerKind sampler = SamplerKind::alpha;
    double alpha = 0.5;
    int k_substitute = 2;
    std::vector<Method> methods{Method::markov, Method::clique, Method::hyperwalk};
    int max_steps = 10;   // K
    int n_walks = 10000;  // N, Monte Carlo walks per start vertex
    std::vector<SizeBin> bins;  // empty -> one open bin starting at 2
    int n_auc_samples = 1000;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;
    int folds = 0;
};

/// One (method, bin, fold) detection result: the best AUC over averaged
/// similarities with 1..K steps.
struct DetectionCell {
    double auc_value = 0.0;
    int best_step = 0;
    int n_true = 0;
    int n_fake = 0;
    std::int64_t n_pairs = 0;
};

struct DetectionReport {
    std::vector<Method> methods;
    std::vector<SizeBin> bins;
    int folds = 0;
    int n_auc_samples = 0;
    std::uint64_t seed = 0;
    /// cells[method][bin][fold]; nullopt when the bin held no probes.
    std::vector<std::vector<std::vector<std::optional<DetectionCell>>>> cells;

    /// Mean +- sample std of per-fold values; nullopt if no fold had data.
    std::optional<Aggregate> aggregate(std::size_t method, std::size_t bin) const;
};

DetectionReport run_detection(const Hypergraph& h, const PipelineConfig& config);

/// Mean-over-folds score gap (true minus fake) per step, computed with the
/// per-step similarity S_k = P^k.
struct GapCurves {
    std::vector<Method> methods;
    std::vector<std::vector<double>> gap;  // [method][k-1]
};

GapCurves gap_over_steps(const Hypergraph& h, const PipelineConfig& config);

/// Least-squares fit of y = a * exp(b x) + c.
struct ExpFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;  // sum of squared errors
    double stderr_a = 0.0;
    double stderr_b = 0.0;
    double stderr_c = 0.0;
    int iterations = 0;
};

/// Fits the exponential model to (x, y); x defaults to 1..n. Initialization
/// uses c0 = min(y) and a log-linear regression of y - c0, refined by damped
/// Gauss-Newton. Throws FitError on non-finite parameters.
ExpFit fit_exponential(const std::vector<double>& y, std::vector<double> x = {});

struct IntruderLine {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of the fitted amplitude a against the intruder
/// count. Needs >= 3 distinct counts.
IntruderLine intruder_line(const std::vector<std::pair<double, ExpFit>>& fits);

/// Inverts the line: round((a - intercept) / slope).
int predict_intruders(const IntruderLine& line, double a_query);

/// Gap curves and exponential fits for several planted intruder counts
/// (k-replace sampler with k = count), plus the per-method amplitude line.
struct IntruderAnalysis {
    std::vector<int> counts;
    std::vector<Method> methods;
    std::vector<std::vector<ExpFit>> fits;  // [method][count index]
    std::vector<IntruderLine> lines;        // [method]
};

IntruderAnalysis run_intruder_analysis(const Hypergraph& h, const PipelineConfig& config,
                                       const std::vector<int>& intruder_counts);

struct GuessConfig {
    int n_passes = 4;
    bool early_stop = true;
    int patience = 2;
    int trials = 1;  // independent deletion draws per probe
};

/// Greedy fill plus cycle-pivot refinement. Fill position t scores
/// candidates with s_steps[min(t, last)] and takes the pool node maximizing
/// the hyperedge score of preserved + chosen + candidate; each refinement
/// pass pivots on one guessed node, refills the rest, and accepts only a
/// strict improvement under the last step matrix. Returns up to `missing`
/// node ids (fewer if the pool runs out).
std::vector<NodeId> guess_with_refinement(const std::vector<NodeId>& preserved, int missing,
                                          const std::vector<SimilarityMatrix>& s_steps,
                                          const std::vector<NodeId>& pool,
                                          const GuessConfig& config = {});

struct PredictionConfig {
    PipelineConfig pipeline;
    GuessConfig guess;
};

/// Per (method, bin, fold) guessing outcome. A probe instance is `seen`
/// when preserved + correctly-guessed is a subset of some training edge and
/// `novel` otherwise; correct counts and theoretical maxima (deleted node
/// counts) are accumulated per category.
struct PredictionCell {
    std::int64_t correct_overall = 0;
    std::int64_t correct_seen = 0;
    std::int64_t correct_novel = 0;
    std::int64_t max_overall = 0;
    std::int64_t max_seen = 0;
    std::int64_t max_novel = 0;
};

struct PredictionReport {
    /// Walk methods in config order, then the uniform-random baseline.
    std::vector<std::string> method_names;
    std::vector<SizeBin> bins;
    int folds = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::vector<std::optional<PredictionCell>>>> cells;

    enum class Category { overall, seen, novel };
    /// Mean +- std over folds of per-fold correct/max ratios.
    std::optional<Aggregate> ratio(std::size_t method, std::size_t bin, Category cat) const;
};

PredictionReport run_prediction(const Hypergraph& h, const PredictionConfig& config);

}  // namespace hyperwalk

#endif
