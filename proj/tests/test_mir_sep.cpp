#include "doctest.h"

#include "mir_grid_oracle.hpp"
#include "support.hpp"

#include "mirlab/errors.hpp"
#include "mirlab/mir_sep.hpp"

#include <numeric>
#include <random>

using namespace mirlab;
using namespace mirlab::testing;

namespace {

Point knapsack_vertex() {
    Point pt{Vector(2), Vector(1)};
    pt.x << 1.5, 0.0;
    pt.v << 0.0;
    return pt;
}

SeparationSolution zero_solution(const SeparationModel& model) {
    const auto& lay = model.layout;
    Vector cols = Vector::Zero(lay.num_cols());
    cols(lay.delta()) = 1.0;
    return SeparationSolution::from_columns(model, cols);
}

// lambda = 0.5 on 2 x1 + 2 x2 + s = 3: c+ = 0.5, a- = (1, 1), b^ = 0.5, b- = 1
SeparationSolution knapsack_half(const SeparationModel& model) {
    SeparationSolution sol = zero_solution(model);
    sol.lambda(0) = 0.5;
    sol.c_plus(0) = 0.5;
    sol.alpha_bar << 1.0, 1.0;
    sol.beta_hat = 0.5;
    sol.beta_bar = 1.0;
    sol.pi(0) = 1.0;
    sol.delta = 2.0 - 1.5;
    sol.delta_k(0) = 0.5;
    sol.objective = separation_objective(model, sol);
    return sol;
}

} // namespace

TEST_CASE("model dimensions for m = n = p = 1, K = 2") {
    const auto inst = single_row_instance();
    Point pt{Vector::Constant(1, 1.5), Vector::Constant(1, 0.5)};
    SeparationConfig config;
    config.bits = 2;
    const auto model = build_separation_model(inst, pt, config);
    CHECK(model.mip.num_cols() == 11);
    CHECK(model.layout.num_cols() == 11);
    CHECK(model.mip.num_rows() == 1 + 1 + 1 + 1 + 1 + 2 + 2);
    CHECK(model.mip.maximize);
    CHECK(model.epsilon(0) == 0.5);
    CHECK(model.epsilon(1) == 0.25);
    CHECK(model.mip.integer[static_cast<std::size_t>(model.layout.alpha_bar())]);
    CHECK(model.mip.integer[static_cast<std::size_t>(model.layout.pi() + 1)]);
    CHECK_FALSE(model.mip.integer[static_cast<std::size_t>(model.layout.delta())]);
}

TEST_CASE("shape errors and config validation") {
    const auto inst = single_row_instance();
    CHECK_THROWS_AS(build_separation_model(inst, Point{Vector::Zero(2), Vector::Zero(1)}, {}), ShapeError);
    SeparationConfig bad;
    bad.bits = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.lambda_bound = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("allowed rows") {
    const auto inst = knapsack_instance();
    const Point pt = knapsack_vertex();
    SUBCASE("empty set forces the trivial cut") {
        SeparationConfig config;
        config.allowed_rows = std::vector<Index>{};
        const auto model = build_separation_model(inst, pt, config);
        CHECK(model.mip.upper(0) == 0.0);
        const auto result = solve_mip(model.mip);
        REQUIRE(result.status == MipStatus::Optimal);
        CHECK(std::abs(result.best_objective) <= 1e-9);
        CHECK(separate(inst, pt, config).cuts.empty());
    }
    SUBCASE("every row leaves the model untouched") {
        SeparationConfig config;
        const auto open = build_separation_model(inst, pt, config);
        config.allowed_rows = std::vector<Index>{0};
        const auto all = build_separation_model(inst, pt, config);
        CHECK(open.mip.lower == all.mip.lower);
        CHECK(open.mip.upper == all.mip.upper);
        CHECK(open.mip.coefficients == all.mip.coefficients);
    }
}

TEST_CASE("recover_cut") {
    const auto inst = knapsack_instance();
    const auto model = build_separation_model(inst, knapsack_vertex(), {});

    SUBCASE("zero solution gives 0 >= 0") {
        const auto cut = recover_cut(model, zero_solution(model));
        CHECK(cut.rhs == 0.0);
        CHECK(cut.coeff_x.isZero());
        CHECK(cut.coeff_v.isZero());
        CHECK(true_violation(cut, knapsack_vertex()) == 0.0);
    }
    SUBCASE("half aggregation of the knapsack row") {
        const auto sol = knapsack_half(model);
        CHECK(separation_residual(model, sol) <= 1e-12);
        // epsilon_1 * Delta_1 = 0.5 * 0.5
        CHECK(sol.objective == doctest::Approx(0.25));
        const auto cut = recover_cut(model, sol);
        CHECK(cut.coeff_v(0) == 0.5);
        CHECK(cut.coeff_x(0) == 0.5);
        CHECK(cut.coeff_x(1) == 0.5);
        CHECK(cut.rhs == 1.0);
        // 1 - (0.5 * 0 + 0.5 * 1.5)
        CHECK(true_violation(cut, knapsack_vertex()) == doctest::Approx(0.25));
        CHECK(validate_cut(cut, inst, default_box(inst)));
    }
    SUBCASE("violating the rhs row is refused") {
        auto sol = knapsack_half(model);
        sol.beta_bar = 1.0;
        sol.beta_hat = 0.501;  // b^ + b- = 1.501 > lambda b = 1.5
        CHECK_THROWS_AS(recover_cut(model, sol), InfeasibleSolution);
    }
}

TEST_CASE("true_violation") {
    MirCut cut;
    cut.coeff_x = Vector::Ones(2);
    cut.coeff_v = Vector::Zero(1);
    cut.rhs = 1.0;
    CHECK(true_violation(cut, Point{Vector::Zero(2), Vector::Zero(1)}) == 1.0);
    CHECK_THROWS_AS(true_violation(cut, Point{Vector::Zero(3), Vector::Zero(1)}), ShapeError);
}

TEST_CASE("validate_cut rejects an invalid inequality") {
    const auto inst = knapsack_instance();
    MirCut trivial;
    trivial.coeff_x = Vector::Zero(2);
    trivial.coeff_v = Vector::Zero(1);
    CHECK(validate_cut(trivial, inst, default_box(inst)));
    MirCut x1_at_least_one = trivial;
    x1_at_least_one.coeff_x(0) = 1.0;
    x1_at_least_one.rhs = 1.0;
    CHECK_FALSE(validate_cut(x1_at_least_one, inst, default_box(inst)));
}

TEST_CASE("separate on the knapsack") {
    const auto inst = knapsack_instance();
    SUBCASE("integral point") {
        Point pt{Vector::Zero(2), Vector::Constant(1, 3.0)};
        CHECK(separate(inst, pt, {}).cuts.empty());
    }
    SUBCASE("fractional vertex") {
        // the grid oracle already finds a violated cut
        CHECK(grid_oracle(inst, knapsack_vertex(), {0}, {-1.0, -0.5, 0.0, 0.5, 1.0}, 6) > 0.0);
        const auto outcome = separate(inst, knapsack_vertex(), {});
        REQUIRE(outcome.status == MipStatus::Optimal);
        REQUIRE_FALSE(outcome.cuts.empty());
        double best = 0.0;
        for (const auto& cut : outcome.cuts) {
            best = std::max(best, true_violation(cut, knapsack_vertex()));
            CHECK(validate_cut(cut, inst, default_box(inst)));
        }
        CHECK(best > 0.0);
        CHECK(outcome.pool.back().objective >= 0.25 - 1e-9);
    }
}

TEST_CASE("separation properties on random tiny instances") {
    std::mt19937_64 rng(21);
    const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
    int separated = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const auto inst = to_standard_form(random_tiny_mip(rng, TinyShape{3, 1, 2, 2}));
        const auto lp = solve_lp(inst);
        REQUIRE(lp.status == LpStatus::Optimal);
        const Point pt = Point::split(inst, lp.primal);
        if (is_integral(pt.x)) continue;
        ++separated;

        SeparationConfig config;
        config.time_limit = 30;
        const auto model = build_separation_model(inst, pt, config);
        const auto result = solve_mip(model.mip, SolverConfig{});
        REQUIRE(result.status == MipStatus::Optimal);
        const auto box = default_box(inst);
        for (const auto& incumbent : result.pool) {
            const auto sol = SeparationSolution::from_columns(model, incumbent.point);
            const auto cut = recover_cut(model, sol);
            const double violation = true_violation(cut, pt);
            CHECK(validate_cut(cut, inst, box));
            CHECK(sol.objective <= violation + 1e-6);
            if (sol.objective > 1e-9) CHECK(violation > 0.0);
        }

        // reduction to the support of the optimum keeps that optimum
        const auto best = SeparationSolution::from_columns(model, result.best_point);
        std::vector<Index> support;
        for (Index j = 0; j < best.lambda.size(); ++j)
            if (best.lambda(j) != 0.0) support.push_back(j);
        SeparationConfig reduced = config;
        reduced.allowed_rows = support;
        const auto reduced_result = solve_mip(build_separation_model(inst, pt, reduced).mip);
        REQUIRE(reduced_result.has_solution());
        CHECK(reduced_result.best_objective >= result.best_objective - 1e-6);

        // enlarging the allowed rows never lowers the optimum; the grid
        // oracle bounds each optimum from below
        if (inst.num_rows() <= 4) {
            std::vector<Index> rows(static_cast<std::size_t>(inst.num_rows()));
            std::iota(rows.begin(), rows.end(), Index{0});
            double previous = 0.0;
            for (std::size_t size = 1; size <= rows.size(); ++size) {
                SeparationConfig nested = config;
                nested.allowed_rows = std::vector<Index>(rows.begin(), rows.begin() + static_cast<long>(size));
                const auto nested_result = solve_mip(build_separation_model(inst, pt, nested).mip);
                REQUIRE(nested_result.status == MipStatus::Optimal);
                CHECK(nested_result.best_objective >= previous - 1e-6);
                CHECK(nested_result.best_objective >= grid_oracle(inst, pt, *nested.allowed_rows, grid, config.bits) - 1e-6);
                previous = nested_result.best_objective;
            }
        }
    }
    CHECK(separated > 5);
}
