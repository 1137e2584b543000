#ifndef HYPERWALK_WALKS_HPP
#define HYPERWALK_WALKS_HPP

#include <cstdint>
#include <vector>

#include "hyperwalk/hypergraph.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/types.hpp"

namespace hyperwalk {

/// Row-stochastic vertex-to-vertex transition matrix.
struct TransitionMatrix {
    Matrix P;
    std::vector<std::string> ordering;
};

/// Empirical per-step transition estimates P_hat_1..P_hat_K from Monte
/// Carlo walks (N walks of length K per start vertex).
struct StepTransitions {
    std::vector<Matrix> steps;
    int n_walks = 0;
    int max_len = 0;
    std::vector<std::string> ordering;
};

/// P = D_V^{-1} W D_E^{-1} R. Throws on a zero node or edge degree, naming
/// the offender.
TransitionMatrix markov_transition(const WalkMatrices& m);

/// Random walk on the weighted clique expansion: pairwise weights
/// w(u,v) = sum over shared edges of omega(e) gamma_e(u) gamma_e(v) / delta(e)
/// including u = v, then row-normalized.
TransitionMatrix clique_transition(const Hypergraph& h);

/// Walker state for the non-Markovian walk; edge < 0 means no current edge.
struct HyperwalkState {
    NodeId node = 0;
    EdgeId edge = -1;
};

/// One step of the non-Markovian walk. With no current edge, or with
/// probability 2/|e| given current edge e, the walker re-selects an edge
/// e' containing the node (prob omega(e')/d(v)) and then a vertex in e'
/// (prob gamma_{e'}(w)/delta(e')). Otherwise it stays in e and re-samples a
/// vertex within it.
HyperwalkState hyperwalk_step(const Hypergraph& h, HyperwalkState state, RngStream& rng);

/// Monte Carlo estimate of the per-step transition matrices: for every start
/// vertex, n_walks seeded paths of max_len steps. Deterministic for a fixed
/// seed regardless of `threads`.
StepTransitions hyperwalk_estimate(const Hypergraph& h, int n_walks, int max_len,
                                   std::uint64_t seed, int threads = 0);

/// Stationary distribution by power iteration from the uniform start.
/// Satisfies ||pi P - pi||_1 < tol; throws ConvergenceError (carrying the
/// final residual) if max_iters is exhausted.
Vector stationary(const TransitionMatrix& t, double tol = 1e-12,
                  std::int64_t max_iters = 1000000);

struct BalanceThresholds {
    double tol_reversible = 1e-10;
    double tol_moderate_severe = 1e-4;
};

/// Detailed-balance diagnostics over unordered node pairs.
struct BalanceReport {
    bool reversible = false;
    double max_violation = 0.0;
    /// Mean over rows of the per-row maximum flux imbalance.
    double mean_max_violation = 0.0;
    std::int64_t total_violations = 0;
    std::int64_t moderate_violations = 0;
    std::int64_t severe_violations = 0;
    BalanceThresholds thresholds;
};

/// Flux differences |pi_i P(i,j) - pi_j P(j,i)|. Pairs above tol_reversible
/// count as violations, split moderate/severe at tol_moderate_severe;
/// reversible iff the maximum is below tol_reversible. Throws if pi is not
/// stationary for P within stationary_tol.
BalanceReport balance_report(const TransitionMatrix& t, const Vector& pi,
                             BalanceThresholds thresholds = {},
                             double stationary_tol = 1e-8);

}  // namespace hyperwalk

#endif
