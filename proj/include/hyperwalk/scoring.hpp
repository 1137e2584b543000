#ifndef HYPERWALK_SCORING_HPP
#define HYPERWALK_SCORING_HPP

#include <vector>

#include "hyperwalk/types.hpp"
#include "hyperwalk/walks.hpp"

namespace hyperwalk {

enum class SimilarityMode { averaged, per_step };

/// Node-to-node similarity. Row i is a probability distribution: the chance
/// of reaching each node from i under the chosen walk summary.
struct SimilarityMatrix {
    Matrix S;
    SimilarityMode mode = SimilarityMode::averaged;
    int steps_used = 0;
    std::vector<std::string> ordering;
};

/// S = (1/K) sum_{k=1..K} P^k.
SimilarityMatrix similarity_avg(const TransitionMatrix& t, int max_steps);
/// Empirical variant: averages the estimated per-step matrices.
SimilarityMatrix similarity_avg(const StepTransitions& t, int max_steps);

/// [P^1, ..., P^K] (or the empirical per-step estimates).
std::vector<SimilarityMatrix> similarity_steps(const TransitionMatrix& t, int max_steps);
std::vector<SimilarityMatrix> similarity_steps(const StepTransitions& t, int max_steps);

/// Generalized Jensen-Shannon divergence of t >= 2 probability rows, in
/// bits; weights default to uniform 1/t. Zero-probability entries contribute
/// nothing. Throws when a row is off normalization by more than 1e-6.
double gjs_divergence(const std::vector<Vector>& rows,
                      const std::vector<double>& weights = {});

/// GJS over rows of S selected by sorted index list (no copies). Internal
/// building block shared with hyperedge_score.
double gjs_divergence_rows(const Matrix& s, const std::vector<NodeId>& sorted_members,
                           const std::vector<double>& weights = {});

/// Hyperedge score 1 - GJS(rows)/log2(t) with uniform weights, clamped to
/// [0, 1]. Members are canonically sorted first, so the score is exactly
/// invariant under permutations of the member list.
double hyperedge_score(const SimilarityMatrix& sim, const std::vector<NodeId>& members);
double hyperedge_score(const Matrix& s, const std::vector<NodeId>& members);

}  // namespace hyperwalk

#endif
