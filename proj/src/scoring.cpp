#include "hyperwalk/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace hyperwalk {

namespace {

void check_steps(int max_steps, int available, bool empirical) {
    if (max_steps < 1) throw InvalidArgument("similarity: step count must be >= 1");
    if (empirical && max_steps > available)
        throw InvalidArgument("similarity: requested " + std::to_string(max_steps) +
                              " steps but only " + std::to_string(available) +
                              " were estimated");
}

}  // namespace

SimilarityMatrix similarity_avg(const TransitionMatrix& t, int max_steps) {
    check_steps(max_steps, 0, false);
    Matrix power = t.P;
    Matrix acc = t.P;
    for (int k = 2; k <= max_steps; ++k) {
        power = Matrix(power * t.P);
        acc += power;
    }
    SimilarityMatrix out;
    out.S = acc / static_cast<double>(max_steps);
    out.mode = SimilarityMode::averaged;
    out.steps_used = max_steps;
    out.ordering = t.ordering;
    return out;
}

SimilarityMatrix similarity_avg(const StepTransitions& t, int max_steps) {
    check_steps(max_steps, static_cast<int>(t.steps.size()), true);
    Matrix acc = t.steps[0];
    for (int k = 1; k < max_steps; ++k) acc += t.steps[k];
    SimilarityMatrix out;
    out.S = acc / static_cast<double>(max_steps);
    out.mode = SimilarityMode::averaged;
    out.steps_used = max_steps;
    out.ordering = t.ordering;
    return out;
}

std::vector<SimilarityMatrix> similarity_steps(const TransitionMatrix& t, int max_steps) {
    check_steps(max_steps, 0, false);
    std::vector<SimilarityMatrix> out;
    out.reserve(max_steps);
    Matrix power = t.P;
    for (int k = 1; k <= max_steps; ++k) {
        if (k > 1) power = Matrix(power * t.P);
        out.push_back({power, SimilarityMode::per_step, k, t.ordering});
    }
    return out;
}

std::vector<SimilarityMatrix> similarity_steps(const StepTransitions& t, int max_steps) {
    check_steps(max_steps, static_cast<int>(t.steps.size()), true);
    std::vector<SimilarityMatrix> out;
    out.reserve(max_steps);
    for (int k = 1; k <= max_steps; ++k)
        out.push_back({t.steps[k - 1], SimilarityMode::per_step, k, t.ordering});
    return out;
}

namespace {

std::vector<double> uniform_weights(std::size_t t) {
    return std::vector<double>(t, 1.0 / static_cast<double>(t));
}

}  // namespace

double gjs_divergence(const std::vector<Vector>& rows, const std::vector<double>& weights) {
    if (rows.size() < 2) throw InvalidArgument("gjs_divergence: need at least 2 distributions");
    const Eigen::Index dim = rows[0].size();
    for (const auto& r : rows) {
        if (r.size() != dim) throw InvalidArgument("gjs_divergence: row length mismatch");
        const double sum = r.sum();
        if (std::abs(sum - 1.0) > 1e-6)
            throw InvalidArgument("gjs_divergence: row sums to " + std::to_string(sum) +
                                  ", not a probability distribution");
    }
    std::vector<double> w = weights.empty() ? uniform_weights(rows.size()) : weights;
    if (w.size() != rows.size())
        throw InvalidArgument("gjs_divergence: weight count does not match rows");
    Vector mixture = Vector::Zero(dim);
    for (std::size_t i = 0; i < rows.size(); ++i) mixture += w[i] * rows[i];
    double js = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Vector& p = rows[i];
        double term = 0.0;
        for (Eigen::Index x = 0; x < dim; ++x)
            if (p[x] > 0.0) term += p[x] * std::log2(p[x] / mixture[x]);
        js += w[i] * term;
    }
    return js;
}

double gjs_divergence_rows(const Matrix& s, const std::vector<NodeId>& sorted_members,
                           const std::vector<double>& weights) {
    const std::size_t t = sorted_members.size();
    if (t < 2) throw InvalidArgument("gjs_divergence_rows: need at least 2 members");
    for (NodeId v : sorted_members)
        if (v < 0 || v >= s.rows())
            throw InvalidArgument("gjs_divergence_rows: member " + std::to_string(v) +
                                  " is not indexed in the similarity matrix");
    std::vector<double> w = weights.empty() ? uniform_weights(t) : weights;
    const Eigen::Index dim = s.cols();
    Vector mixture = Vector::Zero(dim);
    for (std::size_t i = 0; i < t; ++i)
        mixture += w[i] * s.row(sorted_members[i]).transpose();
    double js = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        const auto row = s.row(sorted_members[i]);
        double term = 0.0;
        for (Eigen::Index x = 0; x < dim; ++x)
            if (row[x] > 0.0) term += row[x] * std::log2(row[x] / mixture[x]);
        js += w[i] * term;
    }
    return js;
}

double hyperedge_score(const Matrix& s, const std::vector<NodeId>& members) {
    if (members.size() < 2) throw InvalidArgument("hyperedge_score: need at least 2 members");
    std::vector<NodeId> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1])
            throw InvalidArgument("hyperedge_score: duplicate member");
    const double t = static_cast<double>(sorted.size());
    const double score = 1.0 - gjs_divergence_rows(s, sorted) / std::log2(t);
    return std::clamp(score, 0.0, 1.0);
}

double hyperedge_score(const SimilarityMatrix& sim, const std::vector<NodeId>& members) {
    return hyperedge_score(sim.S, members);
}

}  // namespace hyperwalk
