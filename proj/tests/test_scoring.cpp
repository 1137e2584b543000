#include "hyperwalk/scoring.hpp"

#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperwalk/walks.hpp"

using namespace hyperwalk;
using namespace hyperwalk::testing;

namespace {

// Dense triple-loop multiply, independent of Eigen's product kernels.
Matrix multiply_oracle(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            for (Eigen::Index j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
}

TransitionMatrix three_node_chain() {
    TransitionMatrix t;
    t.P = Matrix(3, 3);
    t.P << 0.5, 0.5, 0.0, 0.25, 0.5, 0.25, 0.0, 0.5, 0.5;
    t.ordering = {"a", "b", "c"};
    return t;
}

}  // namespace

TEST_CASE("similarity averaging") {
    const TransitionMatrix t = three_node_chain();
    SUBCASE("K = 1 is the transition matrix") {
        const SimilarityMatrix s = similarity_avg(t, 1);
        CHECK((s.S - t.P).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("identity is a fixed point") {
        TransitionMatrix id;
        id.P = Matrix::Identity(4, 4);
        id.ordering = {"a", "b", "c", "d"};
        for (int k : {1, 3, 7}) {
            const SimilarityMatrix s = similarity_avg(id, k);
            CHECK((s.S - id.P).cwiseAbs().maxCoeff() < 1e-15);
        }
    }
    SUBCASE("K = 2 equals (P + P^2)/2 against the multiplication oracle") {
        const SimilarityMatrix s = similarity_avg(t, 2);
        const Matrix expected = (t.P + multiply_oracle(t.P, t.P)) / 2.0;
        CHECK((s.S - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
    SUBCASE("rows stay probability distributions") {
        const SimilarityMatrix s = similarity_avg(t, 9);
        for (Eigen::Index i = 0; i < s.S.rows(); ++i)
            CHECK(s.S.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("similarity steps") {
    const TransitionMatrix t = three_node_chain();
    SUBCASE("K = 1 yields [P]") {
        const auto steps = similarity_steps(t, 1);
        REQUIRE(steps.size() == 1);
        CHECK((steps[0].S - t.P).cwiseAbs().maxCoeff() == 0.0);
        CHECK(steps[0].mode == SimilarityMode::per_step);
    }
    SUBCASE("each power is row-stochastic and matches the oracle") {
        const auto steps = similarity_steps(t, 5);
        Matrix power = t.P;
        for (int k = 1; k <= 5; ++k) {
            if (k > 1) power = multiply_oracle(power, t.P);
            CHECK((steps[k - 1].S - power).cwiseAbs().maxCoeff() < 1e-13);
            for (Eigen::Index i = 0; i < power.rows(); ++i)
                CHECK(steps[k - 1].S.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("large powers approach the rank-one stationary matrix") {
        const auto steps = similarity_steps(t, 200);
        const Vector pi = stationary(t, 1e-14);
        const Matrix& last = steps.back().S;
        for (Eigen::Index i = 0; i < last.rows(); ++i)
            for (Eigen::Index j = 0; j < last.cols(); ++j)
                CHECK(std::abs(last(i, j) - pi[j]) < 1e-8);
    }
    SUBCASE("empirical source limits the available steps") {
        StepTransitions st;
        st.steps = {t.P, t.P};
        st.n_walks = 10;
        st.max_len = 2;
        st.ordering = t.ordering;
        CHECK_THROWS_AS(similarity_steps(st, 3), InvalidArgument);
        CHECK_THROWS_AS(similarity_avg(st, 3), InvalidArgument);
        CHECK(similarity_steps(st, 2).size() == 2);
    }
}

TEST_CASE("generalized Jensen-Shannon divergence") {
    SUBCASE("identical rows diverge by zero") {
        Vector p(3);
        p << 0.2, 0.5, 0.3;
        CHECK(gjs_divergence({p, p, p}) == 0.0);
    }
    SUBCASE("disjoint point masses reach log2(t)") {
        for (int t = 2; t <= 5; ++t) {
            std::vector<Vector> rows;
            for (int i = 0; i < t; ++i) {
                Vector row = Vector::Zero(t);
                row[i] = 1.0;
                rows.push_back(row);
            }
            CHECK(gjs_divergence(rows) == doctest::Approx(std::log2(t)).epsilon(1e-12));
        }
    }
    SUBCASE("hand-evaluated two-distribution case") {
        Vector p(2), q(2);
        p << 1.0, 0.0;
        q << 0.5, 0.5;
        // 0.5*log2(4/3) + 0.25*log2(2/3) + 0.25*log2(2)
        const double expected =
            0.5 * std::log2(4.0 / 3.0) + 0.25 * std::log2(2.0 / 3.0) + 0.25;
        CHECK(gjs_divergence({p, q}) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(gjs_divergence({p, q}) == doctest::Approx(0.311278124459133).epsilon(1e-9));
    }
    SUBCASE("rows must be normalized") {
        Vector p(2), bad(2);
        p << 0.5, 0.5;
        bad << 0.7, 0.2;
        CHECK_THROWS_AS(gjs_divergence({p, bad}), InvalidArgument);
        CHECK_THROWS_AS(gjs_divergence({p}), InvalidArgument);
    }
}

TEST_CASE("hyperedge score") {
    SUBCASE("identical rows score 1") {
        Matrix s(4, 4);
        for (int i = 0; i < 4; ++i) s.row(i) << 0.1, 0.2, 0.3, 0.4;
        CHECK(hyperedge_score(s, {0, 1, 2}) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("disjoint point masses score 0") {
        Matrix s = Matrix::Identity(4, 4);
        CHECK(hyperedge_score(s, {0, 1, 2, 3}) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("score is exactly permutation invariant and within [0, 1]") {
        RngStream rng(13, {21});
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 5 + static_cast<int>(rng.uniform_index(4));
            Matrix s(n, n);
            for (int i = 0; i < n; ++i) {
                double total = 0.0;
                for (int j = 0; j < n; ++j) {
                    s(i, j) = rng.next_double();
                    total += s(i, j);
                }
                s.row(i) /= total;
            }
            const int t = 2 + static_cast<int>(rng.uniform_index(n - 2));
            auto picks = rng.sample_without_replacement(n, t);
            std::vector<NodeId> members(picks.begin(), picks.end());
            const double score = hyperedge_score(s, members);
            CHECK(score >= 0.0);
            CHECK(score <= 1.0);
            for (int shuffle = 0; shuffle < 4; ++shuffle) {
                rng.shuffle(members);
                CHECK(hyperedge_score(s, members) == score);
            }
        }
    }
    SUBCASE("duplicating a member row never lowers the score") {
        RngStream rng(29, {22});
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 6;
            Matrix s(n, n);
            for (int i = 0; i < n; ++i) {
                double total = 0.0;
                for (int j = 0; j < n; ++j) {
                    s(i, j) = rng.next_double();
                    total += s(i, j);
                }
                s.row(i) /= total;
            }
            // make node 3's row equal node 0's, then extend {0,1,2} by 3
            s.row(3) = s.row(0);
            const double base = hyperedge_score(s, {0, 1, 2});
            const double extended = hyperedge_score(s, {0, 1, 2, 3});
            CHECK(extended >= base - 1e-12);
        }
    }
    SUBCASE("member outside the matrix is an error") {
        Matrix s = Matrix::Identity(3, 3);
        CHECK_THROWS_AS(hyperedge_score(s, {0, 5}), InvalidArgument);
        CHECK_THROWS_AS(hyperedge_score(s, {2}), InvalidArgument);
    }
}
