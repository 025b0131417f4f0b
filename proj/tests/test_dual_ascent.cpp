#include <cmath>
#include <random>

#include "doctest.h"
#include "isoembed/baselines.hpp"
#include "isoembed/dual_ascent.hpp"
#include "oracles.hpp"

using namespace isoembed;

namespace {

UnitVectorSet<double> axes() { return UnitVectorSet<double>(Matrix<double>::Identity(2, 2)); }

SimplexWeights<double> weights(double a, double b) {
    Vector<double> w(2);
    w << a, b;
    return SimplexWeights<double>(w);
}

OrthonormalBasis<double> column(double a, double b) {
    Matrix<double> v(2, 1);
    v << a, b;
    return OrthonormalBasis<double>(v);
}

AscentConfig<double> iterations(Index t) {
    AscentConfig<double> cfg;
    cfg.iterations = t;
    return cfg;
}

}  // namespace

TEST_CASE("dual_objective on the coordinate axes") {
    CHECK(dual_objective(axes(), weights(0.75, 0.25), 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(dual_objective(axes(), weights(0.5, 0.5), 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(dual_objective(axes(), weights(0.3, 0.7), 2) == 0.0);
    CHECK_THROWS_AS(dual_objective(axes(), weights(0.5, 0.5), 3), RangeError);
    CHECK_THROWS_AS(dual_objective(axes(), SimplexWeights<double>::uniform(3), 1), ShapeError);
}

TEST_CASE("dual_gradient worked examples") {
    const auto g = dual_gradient(axes(), weights(0.75, 0.25), 1);
    CHECK(g[0] == doctest::Approx(-1.0));
    CHECK(g[1] == doctest::Approx(0.0));
    // Central differences of the unconstrained dual agree.
    Vector<double> w(2);
    w << 0.75, 0.25;
    const auto fd = oracles::finite_difference_gradient(Matrix<double>::Identity(2, 2), w, 1, 1e-6);
    CHECK(fd[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(fd[1]) <= 1e-6);

    const auto full = dual_gradient(axes(), weights(0.3, 0.7), 2);
    CHECK(full == Vector<double>::Constant(2, -1.0));

    Matrix<double> single(1, 2);
    single << 1, 0;
    const auto one = dual_gradient(UnitVectorSet<double>(single), SimplexWeights<double>::uniform(1), 1);
    CHECK(one[0] == doctest::Approx(-1.0));
}

TEST_CASE("dual_gradient matches finite differences away from degeneracy") {
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 20) {
        const int n = 4 + static_cast<int>(rng() % 20);
        const int d = 2 + static_cast<int>(rng() % 7);
        const int k = 1 + static_cast<int>(rng() % std::min(3, d - 1));
        const auto x = oracles::random_unit_rows(rng, n, d);
        const auto w = oracles::random_simplex_point(rng, n);
        if (oracles::top_k_gap(x, w, k) <= 1e-6) continue;
        ++checked;
        const auto g = dual_gradient(UnitVectorSet<double>(x), SimplexWeights<double>(w), k);
        const auto fd = oracles::finite_difference_gradient(x, w, k, 1e-6);
        for (Index l = 0; l < n; ++l) {
            CHECK(std::abs(g[l] - fd[l]) <= 1e-4 * std::max(std::abs(fd[l]), 1e-3));
            CHECK(g[l] >= -1.0 - 1e-12);
            CHECK(g[l] <= 1e-12);
        }
        CHECK(g.norm() <= std::sqrt(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("primal_distortion worked examples") {
    const double s = 1.0 / std::sqrt(2.0);
    const auto diagonal = primal_distortion(axes(), column(s, s));
    CHECK(diagonal.phi[0] == doctest::Approx(0.5));
    CHECK(diagonal.phi[1] == doctest::Approx(0.5));
    CHECK(diagonal.epsilon == doctest::Approx(0.5));

    const auto crushed = primal_distortion(axes(), column(1, 0));
    CHECK(crushed.phi[0] == 0.0);
    CHECK(crushed.phi[1] == 1.0);
    CHECK(crushed.epsilon == 1.0);
    CHECK(crushed.argmax == 1);

    std::mt19937_64 rng(4);
    const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 9, 4));
    const auto iso = primal_distortion(x, random_orthonormal_basis<double>(4, 4, 1));
    CHECK(iso.phi == Vector<double>::Zero(9));
    CHECK(iso.epsilon == 0.0);

    CHECK_THROWS_AS(primal_distortion(x, column(1, 0)), ShapeError);
    CHECK_THROWS_AS(primal_distortion(axes(), OrthonormalBasis<double>((Matrix<double>(2, 1) << 1.0, 1e-3).finished(), 1e-3)),
                    ContractError);
}

TEST_CASE("default_step_size") {
    CHECK(default_step_size(2, 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(default_step_size(1035, 120) == doctest::Approx(0.0040137).epsilon(1e-4));
    CHECK(default_step_size(5050, 120) == doctest::Approx(0.0018171).epsilon(1e-4));
    CHECK_THROWS_AS(default_step_size(10, 0), ConfigError);
}

TEST_CASE("run_projected_ascent small cases") {
    SUBCASE("one vector, no iterations") {
        Matrix<double> single(1, 2);
        single << 0.6, 0.8;
        const auto r = run_projected_ascent(UnitVectorSet<double>(single), 1, iterations(0));
        CHECK(std::abs(r.basis.matrix()(0, 0)) == doctest::Approx(0.6));
        CHECK(std::abs(r.basis.matrix()(1, 0)) == doctest::Approx(0.8));
        CHECK(r.distortion.epsilon <= 1e-15);
        CHECK(r.trace.size() == 1);
        CHECK_FALSE(r.step_size.has_value());
    }
    SUBCASE("full dimension") {
        std::mt19937_64 rng(1);
        const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 10, 3));
        const auto r = run_projected_ascent(x, 3, iterations(15));
        CHECK(r.distortion.epsilon == 0.0);
        CHECK(r.best_dual == 0.0);
        for (const auto& rec : r.trace) CHECK(rec.dual_value == 0.0);
    }
    SUBCASE("configuration errors") {
        CHECK_THROWS_AS(run_projected_ascent(axes(), 0, iterations(5)), RangeError);
        CHECK_THROWS_AS(run_projected_ascent(axes(), 1, iterations(-1)), ConfigError);
        auto cfg = iterations(5);
        cfg.step_size = -0.1;
        CHECK_THROWS_AS(run_projected_ascent(axes(), 1, cfg), ConfigError);
    }
}

TEST_CASE("run_projected_ascent at T = 0 is PCA") {
    std::mt19937_64 rng(12);
    const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 30, 6));
    const auto r = run_projected_ascent(x, 2, iterations(0));
    CHECK(r.basis.matrix() == pca_basis(x, 2).matrix());
    CHECK(r.distortion.epsilon == primal_distortion(x, pca_basis(x, 2)).epsilon);
    CHECK(r.selected == SelectedIterate::Best);
}

TEST_CASE("run_projected_ascent replays the documented update rule") {
    // Re-derive the trace from the public primitives: gradient step, simplex
    // projection, scoring, and the average of iterates 1..T.
    std::mt19937_64 rng(21);
    const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 25, 5));
    const Index k = 2;
    const Index t_max = 30;
    const double eta = default_step_size(x.size(), t_max);
    const auto r = run_projected_ascent(x, k, iterations(t_max));
    REQUIRE(r.trace.size() == static_cast<std::size_t>(t_max + 2));
    CHECK(r.step_size.value() == eta);

    auto lambda = SimplexWeights<double>::uniform(x.size());
    Vector<double> sum = Vector<double>::Zero(x.size());
    for (Index t = 1; t <= t_max; ++t) {
        lambda = project_to_simplex((lambda.values() + eta * dual_gradient(x, lambda, k)).eval());
        sum += lambda.values();
        const auto& rec = r.trace[static_cast<std::size_t>(t)];
        CHECK(rec.t == t);
        CHECK(rec.dual_value == doctest::Approx(dual_objective(x, lambda, k)).epsilon(1e-12));
        CHECK(rec.primal_epsilon ==
              doctest::Approx(primal_distortion(x, top_k_eigenpairs(weighted_moment_matrix(x, lambda), k).basis).epsilon)
                  .epsilon(1e-12));
    }
    const SimplexWeights<double> average((sum / double(t_max)).eval());
    CHECK(r.trace.back().average);
    CHECK(r.trace.back().dual_value == doctest::Approx(dual_objective(x, average, k)).epsilon(1e-12));
}

TEST_CASE("run_projected_ascent invariants") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 5 + trial * 3;
        const int d = 3 + trial % 5;
        const int k = 1 + trial % (d - 1);
        const UnitVectorSet<double> x(oracles::random_unit_rows(rng, n, d));
        const auto r = run_projected_ascent(x, k, iterations(60));

        double max_dual = 0.0;
        double min_eps = 1.0;
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& rec = r.trace[i];
            max_dual = std::max(max_dual, rec.dual_value);
            min_eps = std::min(min_eps, rec.primal_epsilon);
            CHECK(rec.dual_value >= 0.0);
            CHECK(rec.dual_value <= 1.0);
            CHECK(rec.primal_epsilon >= 0.0);
            CHECK(rec.primal_epsilon <= 1.0);
            if (i > 0 && !rec.average) CHECK(rec.best_epsilon <= r.trace[i - 1].best_epsilon);
        }
        // Weak duality across every pair of iterates.
        CHECK(max_dual <= min_eps + 1e-8);
        CHECK(r.best_dual == max_dual);
        CHECK(r.best_dual <= r.distortion.epsilon + 1e-8);
        CHECK(r.distortion.epsilon == min_eps);
        CHECK(r.distortion.epsilon <= primal_distortion(x, pca_basis(x, k)).epsilon + 1e-12);
        CHECK(orthonormality_error(r.basis.matrix()) <= 1e-8);
        CHECK(is_on_simplex(r.lambda.values(), 1e-9));
    }
}

TEST_CASE("run_projected_ascent without averaging") {
    std::mt19937_64 rng(2);
    const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 12, 4));
    auto cfg = iterations(20);
    cfg.evaluate_average = false;
    const auto r = run_projected_ascent(x, 2, cfg);
    CHECK(r.trace.size() == 21);
    CHECK(r.selected == SelectedIterate::Best);
}

TEST_CASE("run_projected_ascent flags degenerate iterates") {
    // Two orthogonal directions at uniform weight: M = I/2, no top-1 gap.
    // M(λ) stays diagonal for every λ, so every recovered direction is an
    // axis and crushes the other vector, although the diagonal achieves 0.5.
    const auto r = run_projected_ascent(axes(), 1, iterations(3));
    CHECK(r.trace.front().degenerate);
    CHECK(r.degenerate_iterations >= 1);
    CHECK(r.distortion.epsilon == 1.0);
    CHECK(grid_search_optimum(axes(), 1, 1000).epsilon == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("run_projected_ascent near the grid optimum for 20 vectors in 3-D" * doctest::may_fail()) {
    // Frozen instance; the grid-search oracle bounds p* from above. The
    // ascent's rounding of the dual solution does not reach within 1e-2 on
    // generic data (see README, "Known limitations"), so this is reported
    // but not enforced. The PCA dominance half is enforced below.
    std::mt19937_64 rng(20);
    const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 20, 3));
    const auto r = run_projected_ascent(x, 1, iterations(200));
    const auto grid = grid_search_optimum(x, 1, 10000);
    MESSAGE("eps_alg = " << r.distortion.epsilon << ", grid optimum = " << grid.epsilon);
    CHECK(r.distortion.epsilon <= grid.epsilon + 1e-2);
}

TEST_CASE("run_projected_ascent never loses to PCA on 20 vectors in 3-D") {
    std::mt19937_64 rng(20);
    const UnitVectorSet<double> x(oracles::random_unit_rows(rng, 20, 3));
    const auto r = run_projected_ascent(x, 1, iterations(200));
    CHECK(r.distortion.epsilon <= primal_distortion(x, pca_basis(x, 1)).epsilon);
}

TEST_CASE("pairwise sets score distortion from the projected points") {
    std::mt19937_64 rng(88);
    std::normal_distribution<double> normal;
    for (double offset : {0.0, 1e3}) {
        Matrix<double> u(40, 6);
        for (Index i = 0; i < u.size(); ++i) u(i) = normal(rng) + offset;
        const auto pairs = pairwise_unit_differences(PointSet<double>(u)).vectors;
        REQUIRE(pairs.pair_origin() != nullptr);
        const UnitVectorSet<double> dense(pairs.matrix());
        CHECK(dense.pair_origin() == nullptr);

        const auto v = random_orthonormal_basis<double>(6, 2, 5);
        const auto a = primal_distortion(pairs, v);
        const auto b = primal_distortion(dense, v);
        CHECK((a.phi - b.phi).cwiseAbs().maxCoeff() <= 1e-12);

        const std::vector<Index> picked = {3, 17, 100, 779};
        const auto subset = pairs.select_rows(picked);
        REQUIRE(subset.pair_origin() != nullptr);
        const auto c = primal_distortion(subset, v);
        for (std::size_t i = 0; i < picked.size(); ++i) {
            CHECK(c.phi[static_cast<Index>(i)] == a.phi[picked[i]]);
        }
    }
}
