#include "hyperwalk/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperwalk/report_io.hpp"

using namespace hyperwalk;
using namespace hyperwalk::testing;

namespace {

// Exhaustive pair enumeration, the defining formula.
double auc_oracle(const std::vector<double>& t, const std::vector<double>& f) {
    std::int64_t wins = 0, ties = 0;
    for (double a : t)
        for (double b : f) {
            if (a > b)
                ++wins;
            else if (a == b)
                ++ties;
        }
    return (wins + 0.5 * ties) / (static_cast<double>(t.size()) * static_cast<double>(f.size()));
}

double gaussian(RngStream& rng) {
    // Box-Muller
    const double u1 = std::max(rng.next_double(), 1e-300);
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

PipelineConfig small_pipeline(std::uint64_t seed) {
    PipelineConfig config;
    config.folds = 3;
    config.probe_fraction = 0.12;
    config.sampler = SamplerKind::alpha;
    config.alpha = 0.5;
    config.max_steps = 5;
    config.n_walks = 1500;
    config.n_auc_samples = 1000;
    config.seed = seed;
    config.threads = 2;
    return config;
}

}  // namespace

TEST_CASE("auc") {
    SUBCASE("hand-enumerated example") {
        CHECK(auc({0.9, 0.8}, {0.5, 0.8}) == doctest::Approx(0.875).epsilon(1e-15));
    }
    SUBCASE("perfect separation and all-ties") {
        CHECK(auc({0.9, 0.8}, {0.1, 0.2}) == 1.0);
        CHECK(auc({0.3, 0.3}, {0.3, 0.3}) == 0.5);
    }
    SUBCASE("empty lists are rejected") {
        CHECK_THROWS_AS(auc({}, {0.5}), InvalidArgument);
        CHECK_THROWS_AS(auc({0.5}, {}), InvalidArgument);
    }
    SUBCASE("matches exhaustive enumeration on tie-heavy random lists") {
        RngStream rng(41, {6});
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t nt = 1 + rng.uniform_index(12);
            const std::size_t nf = 1 + rng.uniform_index(12);
            std::vector<double> t(nt), f(nf);
            // few distinct values force many exact ties
            for (auto& v : t) v = 0.1 * static_cast<double>(rng.uniform_index(5));
            for (auto& v : f) v = 0.1 * static_cast<double>(rng.uniform_index(5));
            const double got = auc(t, f);
            CHECK(got == doctest::Approx(auc_oracle(t, f)).epsilon(1e-15));
            CHECK(got >= 0.0);
            CHECK(got <= 1.0);
            CHECK(auc(f, t) == doctest::Approx(1.0 - got).epsilon(1e-12));
        }
    }
}

TEST_CASE("bin parsing") {
    const auto bins = parse_bins("3-6,7-10,11-");
    REQUIRE(bins.size() == 3);
    CHECK(bins[0].lo == 3);
    CHECK(bins[0].hi == 6);
    CHECK(bins[2].lo == 11);
    CHECK(bins[2].hi == -1);
    CHECK(bins[2].contains(500));
    CHECK(!bins[0].contains(7));
    CHECK(bin_label(bins[1]) == "7-10");
    CHECK(bin_label(bins[2]) == "11-");
    CHECK_THROWS_AS(parse_bins(""), InvalidArgument);
    CHECK_THROWS_AS(parse_bins("abc"), InvalidArgument);
    CHECK_THROWS_AS(parse_bins("6-3"), InvalidArgument);
    CHECK_THROWS_AS(parse_bins("3-6,5-9"), InvalidArgument);   // overlap
    CHECK_THROWS_AS(parse_bins("3-,7-10"), InvalidArgument);   // open bin not last
}

TEST_CASE("exponential fit") {
    SUBCASE("noiseless recovery") {
        std::vector<double> y;
        for (int x = 1; x <= 30; ++x) y.push_back(0.2 * std::exp(-0.5 * x) + 0.01);
        const ExpFit fit = fit_exponential(y);
        CHECK(std::abs(fit.a - 0.2) < 1e-6);
        CHECK(std::abs(fit.b + 0.5) < 1e-6);
        CHECK(std::abs(fit.c - 0.01) < 1e-6);
        CHECK(fit.residual < 1e-12);
    }
    SUBCASE("flat data is handled") {
        const std::vector<double> y(10, 0.37);
        const ExpFit fit = fit_exponential(y);
        CHECK(std::abs(fit.a * std::exp(fit.b) + fit.c - 0.37) < 1e-9);
        CHECK(fit.residual < 1e-12);
    }
    SUBCASE("too few points") {
        CHECK_THROWS_AS(fit_exponential({1.0, 2.0, 3.0}), InvalidArgument);
    }
    SUBCASE("noisy fit lands within 3 bootstrap deviations of the truth") {
        const double a = 0.3, b = -0.25, c = 0.05, sigma = 0.01;
        RngStream rng(55, {8});
        std::vector<double> x, clean, y;
        for (int i = 1; i <= 40; ++i) {
            x.push_back(i);
            clean.push_back(a * std::exp(b * i) + c);
            y.push_back(clean.back() + sigma * gaussian(rng));
        }
        const ExpFit fit = fit_exponential(y, x);

        // bootstrap oracle: resample residuals, refit, take the spread
        std::vector<double> residuals;
        for (std::size_t i = 0; i < y.size(); ++i)
            residuals.push_back(y[i] - (fit.a * std::exp(fit.b * x[i]) + fit.c));
        std::vector<double> boot_a, boot_b, boot_c;
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> resampled;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double r = residuals[rng.uniform_index(residuals.size())];
                resampled.push_back(fit.a * std::exp(fit.b * x[i]) + fit.c + r);
            }
            const ExpFit rf = fit_exponential(resampled, x);
            boot_a.push_back(rf.a);
            boot_b.push_back(rf.b);
            boot_c.push_back(rf.c);
        }
        auto stddev = [](const std::vector<double>& v) {
            double mean = 0.0;
            for (double z : v) mean += z;
            mean /= v.size();
            double ss = 0.0;
            for (double z : v) ss += (z - mean) * (z - mean);
            return std::sqrt(ss / (v.size() - 1));
        };
        CHECK(std::abs(fit.a - a) < 3 * stddev(boot_a));
        CHECK(std::abs(fit.b - b) < 3 * stddev(boot_b));
        CHECK(std::abs(fit.c - c) < 3 * stddev(boot_c));
        // analytic standard errors agree with the bootstrap within a factor
        CHECK(fit.stderr_a > 0.0);
        CHECK(fit.stderr_a < 10 * stddev(boot_a));
        CHECK(fit.stderr_a > 0.1 * stddev(boot_a));
    }
}

TEST_CASE("intruder line") {
    SUBCASE("exact line is recovered and inverted") {
        std::vector<std::pair<double, ExpFit>> fits;
        for (int n : {1, 2, 3, 4}) {
            ExpFit fit;
            fit.a = 0.1 * n;
            fits.emplace_back(n, fit);
        }
        const IntruderLine line = intruder_line(fits);
        CHECK(line.slope == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(line.intercept == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(line.r_squared == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(predict_intruders(line, 0.3) == 3);
        CHECK(predict_intruders(line, 0.32) == 3);
    }
    SUBCASE("degenerate x variance is rejected") {
        std::vector<std::pair<double, ExpFit>> fits;
        ExpFit fit;
        for (int i = 0; i < 3; ++i) fits.emplace_back(2.0, fit);
        CHECK_THROWS_AS(intruder_line(fits), InvalidArgument);
        fits.clear();
        fits.emplace_back(1.0, fit);
        fits.emplace_back(2.0, fit);
        CHECK_THROWS_AS(intruder_line(fits), InvalidArgument);
    }
}

TEST_CASE("guess with refinement") {
    SUBCASE("nothing to guess") {
        Matrix s = Matrix::Identity(3, 3);
        std::vector<SimilarityMatrix> steps{{s, SimilarityMode::per_step, 1, {}}};
        CHECK(guess_with_refinement({0}, 0, steps, {1, 2}).empty());
    }
    SUBCASE("greedy pick matches the exhaustive argmax oracle") {
        const Hypergraph h = planted_community_hypergraph({.communities = 3});
        const TransitionMatrix t = markov_transition(incidence_matrices(h));
        const auto steps = similarity_steps(t, 4);
        RngStream rng(61, {9});
        for (int trial = 0; trial < 20; ++trial) {
            // preserved: most of a training edge
            const EdgeId e = static_cast<EdgeId>(rng.uniform_index(h.edge_count()));
            const auto& members = h.members(e);
            if (members.size() < 3) continue;
            std::vector<NodeId> preserved(members.begin(), members.end() - 1);
            std::vector<NodeId> pool;
            for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
                if (std::find(preserved.begin(), preserved.end(), v) == preserved.end())
                    pool.push_back(v);
            const auto guessed = guess_with_refinement(preserved, 1, steps, pool);
            REQUIRE(guessed.size() == 1);
            // position 1 uses steps[min(1, last)]
            const Matrix& s1 = steps[1].S;
            double best = -1.0;
            NodeId best_node = -1;
            for (NodeId j : pool) {
                std::vector<NodeId> candidate = preserved;
                candidate.push_back(j);
                const double score = hyperedge_score(s1, candidate);
                if (score > best) {
                    best = score;
                    best_node = j;
                }
            }
            CHECK(guessed[0] == best_node);
        }
    }
    SUBCASE("refinement never degrades the greedy score") {
        const Hypergraph h = planted_community_hypergraph({.communities = 3});
        const TransitionMatrix t = markov_transition(incidence_matrices(h));
        const auto steps = similarity_steps(t, 4);
        RngStream rng(67, {10});
        for (int trial = 0; trial < 15; ++trial) {
            const EdgeId e = static_cast<EdgeId>(rng.uniform_index(h.edge_count()));
            const auto& members = h.members(e);
            if (members.size() < 4) continue;
            std::vector<NodeId> preserved(members.begin(), members.begin() + 2);
            std::vector<NodeId> pool;
            for (NodeId v = 0; static_cast<std::size_t>(v) < h.node_count(); ++v)
                if (std::find(preserved.begin(), preserved.end(), v) == preserved.end())
                    pool.push_back(v);
            const int missing = static_cast<int>(members.size()) - 2;

            GuessConfig no_refine;
            no_refine.n_passes = 0;
            GuessConfig refine;
            refine.n_passes = 6;
            refine.patience = 3;
            const auto greedy = guess_with_refinement(preserved, missing, steps, pool, no_refine);
            const auto refined = guess_with_refinement(preserved, missing, steps, pool, refine);

            auto final_score = [&](const std::vector<NodeId>& guessed) {
                std::vector<NodeId> full = preserved;
                full.insert(full.end(), guessed.begin(), guessed.end());
                return hyperedge_score(steps.back().S, full);
            };
            CHECK(final_score(refined) >= final_score(greedy) - 1e-15);
        }
    }
}

TEST_CASE("run_detection on the planted fixture") {
    const Hypergraph h = planted_community_hypergraph({.communities = 4});
    PipelineConfig config = small_pipeline(101);
    config.bins = parse_bins("3-6,7-");

    const DetectionReport report = run_detection(h, config);
    REQUIRE(report.cells.size() == 3);

    SUBCASE("planted structure is detectable") {
        for (std::size_t m = 0; m < report.methods.size(); ++m) {
            for (std::size_t b = 0; b < report.bins.size(); ++b) {
                const auto agg = report.aggregate(m, b);
                REQUIRE(agg.has_value());
                CHECK(agg->mean > 0.7);
                CHECK(agg->mean <= 1.0);
            }
        }
    }
    SUBCASE("cells carry per-fold metadata") {
        for (std::size_t m = 0; m < report.methods.size(); ++m)
            for (std::size_t b = 0; b < report.bins.size(); ++b)
                for (int f = 0; f < config.folds; ++f) {
                    const auto& cell = report.cells[m][b][f];
                    REQUIRE(cell.has_value());
                    CHECK(cell->auc_value >= 0.0);
                    CHECK(cell->auc_value <= 1.0);
                    CHECK(cell->best_step >= 1);
                    CHECK(cell->best_step <= config.max_steps);
                    CHECK(cell->n_pairs <= config.n_auc_samples);
                }
    }
    SUBCASE("reports are bit-identical across repeats and thread counts") {
        const DetectionReport again = run_detection(h, config);
        PipelineConfig single = config;
        single.threads = 1;
        const DetectionReport serial = run_detection(h, single);
        const std::string a = to_json_string(report);
        CHECK(a == to_json_string(again));
        CHECK(a == to_json_string(serial));
    }
    SUBCASE("empty bins are absent, not zero") {
        PipelineConfig narrow = config;
        narrow.bins = parse_bins("3-4,30-");
        const DetectionReport r = run_detection(h, narrow);
        for (std::size_t m = 0; m < r.methods.size(); ++m) {
            CHECK(r.aggregate(m, 0).has_value());
            CHECK(!r.aggregate(m, 1).has_value());
        }
    }
}

TEST_CASE("gap curves decay for markovian methods") {
    const Hypergraph h = planted_community_hypergraph({.communities = 4});
    PipelineConfig config = small_pipeline(113);
    config.methods = {Method::markov, Method::clique};
    config.max_steps = 40;

    const GapCurves curves = gap_over_steps(h, config);
    REQUIRE(curves.gap.size() == 2);
    for (std::size_t m = 0; m < curves.gap.size(); ++m) {
        CHECK(curves.gap[m][0] > 0.01);     // strong signal at step 1
        CHECK(std::abs(curves.gap[m][39]) < 1e-3);  // decayed by step 40
        CHECK(std::abs(curves.gap[m][39]) < curves.gap[m][0] * 1e-2);
    }
}

TEST_CASE("hyperwalk gap decays strictly slower than the markov gap") {
    const Hypergraph h = planted_community_hypergraph({});
    PipelineConfig config;
    config.folds = 2;
    config.probe_fraction = 0.1;
    config.alpha = 0.5;
    config.methods = {Method::markov, Method::hyperwalk};
    config.max_steps = 50;
    config.n_walks = 2000;
    config.seed = 131;
    config.threads = 2;
    const GapCurves curves = gap_over_steps(h, config);
    for (int k = 5; k <= 50; ++k)
        CHECK(curves.gap[1][k - 1] > curves.gap[0][k - 1]);
}

TEST_CASE("run_prediction accounting") {
    Hypergraph h;
    // 4 communities x 8 nodes, all edges size 4 so the deletion count and
    // the random-baseline pool size are constant
    {
        RngStream rng(2024, {12});
        for (int v = 0; v < 32; ++v) h.add_node("p" + std::to_string(v));
        auto add4 = [&](int c, RngStream& r) {
            auto picks = r.sample_without_replacement(8, 4);
            std::vector<NodeId> members;
            for (auto p : picks) members.push_back(static_cast<NodeId>(c * 8 + p));
            std::vector<double> gamma(4, 1.0);
            gamma[0] = 2.0;
            h.add_edge(std::move(members), std::move(gamma), 4.0);
        };
        for (int c = 0; c < 4; ++c) {
            // cover all 8 nodes, then extras
            h.add_edge({static_cast<NodeId>(c * 8), static_cast<NodeId>(c * 8 + 1),
                        static_cast<NodeId>(c * 8 + 2), static_cast<NodeId>(c * 8 + 3)},
                       {2.0, 1.0, 1.0, 1.0}, 4.0);
            h.add_edge({static_cast<NodeId>(c * 8 + 4), static_cast<NodeId>(c * 8 + 5),
                        static_cast<NodeId>(c * 8 + 6), static_cast<NodeId>(c * 8 + 7)},
                       {2.0, 1.0, 1.0, 1.0}, 4.0);
            for (int i = 0; i < 6; ++i) add4(c, rng);
        }
        // bridges
        for (int c = 0; c < 4; ++c) {
            const int o = (c + 1) % 4;
            h.add_edge({static_cast<NodeId>(c * 8), static_cast<NodeId>(c * 8 + 4),
                        static_cast<NodeId>(o * 8 + 1), static_cast<NodeId>(o * 8 + 5)},
                       {2.0, 1.0, 1.0, 1.0}, 8.0);
        }
    }
    REQUIRE(is_connected(h));

    PredictionConfig config;
    config.pipeline = small_pipeline(127);
    config.pipeline.methods = {Method::markov};
    config.pipeline.folds = 4;
    config.pipeline.probe_fraction = 0.15;
    config.pipeline.max_steps = 3;
    config.guess.trials = 2;

    const PredictionReport report = run_prediction(h, config);
    REQUIRE(report.method_names.size() == 2);
    CHECK(report.method_names[1] == "random");

    SUBCASE("seen + novel = overall and correct <= max") {
        for (std::size_t m = 0; m < report.method_names.size(); ++m)
            for (std::size_t b = 0; b < report.bins.size(); ++b)
                for (int f = 0; f < report.folds; ++f) {
                    const auto& cell = report.cells[m][b][f];
                    if (!cell) continue;
                    CHECK(cell->correct_overall == cell->correct_seen + cell->correct_novel);
                    CHECK(cell->max_overall == cell->max_seen + cell->max_novel);
                    CHECK(cell->correct_overall <= cell->max_overall);
                    CHECK(cell->correct_seen <= cell->max_seen);
                    CHECK(cell->correct_novel <= cell->max_novel);
                }
    }
    SUBCASE("guessing beats the uniform baseline overall") {
        const auto walk = report.ratio(0, 0, PredictionReport::Category::overall);
        const auto random = report.ratio(1, 0, PredictionReport::Category::overall);
        REQUIRE(walk.has_value());
        REQUIRE(random.has_value());
        CHECK(walk->mean > random->mean);
    }
    SUBCASE("random baseline tracks the closed-form expectation") {
        // all edges have size 4, so every instance deletes m = 2 of 4 and
        // draws from a pool of 32 - 2 = 30; E[overlap] = m^2 / pool
        std::int64_t correct = 0, max = 0;
        for (std::size_t b = 0; b < report.bins.size(); ++b)
            for (int f = 0; f < report.folds; ++f)
                if (const auto& cell = report.cells[1][b][f]) {
                    correct += cell->correct_overall;
                    max += cell->max_overall;
                }
        REQUIRE(max > 0);
        const double m = 2.0, pool = 30.0;
        const std::int64_t instances = max / 2;
        const double expected = static_cast<double>(instances) * m * (m / pool);
        // hypergeometric variance per instance
        const double var = m * (m / pool) * (1.0 - m / pool) * (pool - m) / (pool - 1.0);
        const double sigma = std::sqrt(static_cast<double>(instances) * var);
        CHECK(std::abs(static_cast<double>(correct) - expected) <= 3.0 * sigma + 1.0);
    }
    SUBCASE("prediction is deterministic across thread counts") {
        PredictionConfig serial = config;
        serial.pipeline.threads = 1;
        CHECK(to_json_string(run_prediction(h, serial)) == to_json_string(report));
    }
    SUBCASE("near-1 alpha clamps deletions to one and still beats random") {
        PredictionConfig clamped = config;
        clamped.pipeline.alpha = 0.999;
        clamped.guess.trials = 3;
        const PredictionReport r = run_prediction(h, clamped);
        // every instance deletes exactly one node, so per-fold maxima equal
        // 3 trials x the probe count and stay divisible by 3
        for (std::size_t b = 0; b < r.bins.size(); ++b)
            for (int f = 0; f < r.folds; ++f)
                if (const auto& cell = r.cells[0][b][f]) CHECK(cell->max_overall % 3 == 0);
        const auto walk = r.ratio(0, 0, PredictionReport::Category::overall);
        const auto random = r.ratio(1, 0, PredictionReport::Category::overall);
        REQUIRE(walk.has_value());
        REQUIRE(random.has_value());
        CHECK(walk->mean >= random->mean);
    }
}
