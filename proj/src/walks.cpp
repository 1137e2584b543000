#include "hyperwalk/walks.hpp"

#include <algorithm>
#include <cmath>

#include "hyperwalk/parallel.hpp"

namespace hyperwalk {

TransitionMatrix markov_transition(const WalkMatrices& m) {
    const Eigen::Index n_nodes = m.W.rows();
    const Eigen::Index n_edges = m.R.rows();
    for (Eigen::Index v = 0; v < n_nodes; ++v)
        if (!(m.node_degree[v] > 0.0))
            throw InvalidArgument("markov_transition: node '" +
                                  (v < static_cast<Eigen::Index>(m.ordering.size())
                                       ? m.ordering[v]
                                       : std::to_string(v)) +
                                  "' has zero degree");
    for (Eigen::Index e = 0; e < n_edges; ++e)
        if (!(m.edge_degree[e] > 0.0))
            throw InvalidArgument("markov_transition: edge " + std::to_string(e) +
                                  " has zero degree");

    Eigen::SparseMatrix<double, Eigen::RowMajor> scaled_w = m.W;
    for (Eigen::Index v = 0; v < n_nodes; ++v)
        scaled_w.row(v) /= m.node_degree[v];
    Eigen::SparseMatrix<double, Eigen::RowMajor> scaled_r = m.R;
    for (Eigen::Index e = 0; e < n_edges; ++e)
        scaled_r.row(e) /= m.edge_degree[e];

    TransitionMatrix out;
    out.P = Matrix(scaled_w * scaled_r);
    out.ordering = m.ordering;
    return out;
}

TransitionMatrix clique_transition(const Hypergraph& h) {
    const auto n = static_cast<Eigen::Index>(h.node_count());
    Matrix w = Matrix::Zero(n, n);
    for (EdgeId e = 0; static_cast<std::size_t>(e) < h.edge_count(); ++e) {
        const auto& members = h.members(e);
        const auto& gamma = h.member_gamma(e);
        const double scale = h.omega(e) / h.edge_degree(e);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = 0; j < members.size(); ++j)
                w(members[i], members[j]) += scale * gamma[i] * gamma[j];
    }
    TransitionMatrix out;
    out.P = Matrix(n, n);
    for (Eigen::Index u = 0; u < n; ++u) {
        const double row_sum = w.row(u).sum();
        if (!(row_sum > 0.0))
            throw InvalidArgument("clique_transition: node '" + h.node_name(u) +
                                  "' is isolated in the projection");
        out.P.row(u) = w.row(u) / row_sum;
    }
    out.ordering = h.node_names();
    return out;
}

namespace {

NodeId sample_vertex(const Hypergraph& h, EdgeId e, RngStream& rng) {
    const auto& members = h.members(e);
    const auto& gamma = h.member_gamma(e);
    double u = rng.next_double() * h.edge_degree(e);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        acc += gamma[i];
        if (u < acc) return members[i];
    }
    return members.back();
}

// Step 1 + 2 of the walk: fresh edge by omega weight, then vertex by gamma.
HyperwalkState fresh_move(const Hypergraph& h, NodeId v, RngStream& rng) {
    const auto& edges = h.incident_edges(v);
    EdgeId e;
    if (edges.size() == 1) {
        e = edges[0];
    } else {
        double u = rng.next_double() * h.node_degree(v);
        double acc = 0.0;
        e = edges.back();
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            acc += h.omega(edges[i]);
            if (u < acc) {
                e = edges[i];
                break;
            }
        }
    }
    return {sample_vertex(h, e, rng), e};
}

}  // namespace

HyperwalkState hyperwalk_step(const Hypergraph& h, HyperwalkState state, RngStream& rng) {
    if (state.edge >= 0) {
        const double size = static_cast<double>(h.members(state.edge).size());
        const double restart = 2.0 / size;  // 1 - (|e|-2)/|e|
        if (rng.next_double() >= restart)
            return {sample_vertex(h, state.edge, rng), state.edge};
    }
    return fresh_move(h, state.node, rng);
}

StepTransitions hyperwalk_estimate(const Hypergraph& h, int n_walks, int max_len,
                                   std::uint64_t seed, int threads) {
    if (n_walks < 1) throw InvalidArgument("hyperwalk_estimate: n_walks must be >= 1");
    if (max_len < 1) throw InvalidArgument("hyperwalk_estimate: max_len must be >= 1");
    const auto n = static_cast<Eigen::Index>(h.node_count());
    StepTransitions out;
    out.n_walks = n_walks;
    out.max_len = max_len;
    out.ordering = h.node_names();
    out.steps.assign(max_len, Matrix::Zero(n, n));

    // Counts land in disjoint rows per start vertex, so any partition of the
    // start vertices yields bit-identical results.
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t start = begin; start < end; ++start) {
            for (int walk = 0; walk < n_walks; ++walk) {
                RngStream rng(seed, {static_cast<std::uint64_t>(start),
                                     static_cast<std::uint64_t>(walk)});
                HyperwalkState state{static_cast<NodeId>(start), -1};
                for (int k = 0; k < max_len; ++k) {
                    state = hyperwalk_step(h, state, rng);
                    out.steps[k](static_cast<Eigen::Index>(start), state.node) += 1.0;
                }
            }
        }
    });

    for (auto& step : out.steps)
        for (Eigen::Index v = 0; v < n; ++v) {
            const double total = step.row(v).sum();  // == n_walks exactly
            step.row(v) /= total;
        }
    return out;
}

Vector stationary(const TransitionMatrix& t, double tol, std::int64_t max_iters) {
    const Eigen::Index n = t.P.rows();
    if (n == 0) throw InvalidArgument("stationary: empty transition matrix");
    Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double residual = std::numeric_limits<double>::infinity();
    for (std::int64_t it = 0; it < max_iters; ++it) {
        Vector next = t.P.transpose() * pi;
        next /= next.sum();
        residual = (next - pi).lpNorm<1>();
        pi = std::move(next);
        if (residual < tol) return pi;
    }
    throw ConvergenceError("stationary: power iteration did not reach tol=" +
                               std::to_string(tol) + ", residual=" + std::to_string(residual),
                           residual);
}

BalanceReport balance_report(const TransitionMatrix& t, const Vector& pi,
                             BalanceThresholds thresholds, double stationary_tol) {
    const Eigen::Index n = t.P.rows();
    if (pi.size() != n) throw InvalidArgument("balance_report: pi size mismatch");
    const double residual = (Vector(t.P.transpose() * pi) - pi).lpNorm<1>();
    if (!(residual <= stationary_tol))
        throw InvalidArgument("balance_report: pi is not stationary (residual " +
                              std::to_string(residual) + " > " +
                              std::to_string(stationary_tol) + ")");

    BalanceReport report;
    report.thresholds = thresholds;
    double row_max_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row_max = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double flux = std::abs(pi[i] * t.P(i, j) - pi[j] * t.P(j, i));
            row_max = std::max(row_max, flux);
            if (j > i) {
                report.max_violation = std::max(report.max_violation, flux);
                if (flux > thresholds.tol_reversible) {
                    if (flux >= thresholds.tol_moderate_severe)
                        ++report.severe_violations;
                    else
                        ++report.moderate_violations;
                }
            }
        }
        row_max_sum += row_max;
    }
    report.total_violations = report.moderate_violations + report.severe_violations;
    report.mean_max_violation = n > 0 ? row_max_sum / static_cast<double>(n) : 0.0;
    report.reversible = report.max_violation < thresholds.tol_reversible;
    return report;
}

}  // namespace hyperwalk
