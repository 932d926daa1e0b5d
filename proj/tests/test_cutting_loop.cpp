#include "doctest.h"

#include "support.hpp"

#include "mirlab/cutting_loop.hpp"
#include "mirlab/errors.hpp"
#include "mirlab/oracle.hpp"

#include <random>

using namespace mirlab;
using namespace mirlab::testing;

TEST_CASE("gap_closed formula") {
    CHECK(*gap_closed(-1.5, -1.5, -1.0) == 0.0);
    CHECK(*gap_closed(-1.0, -1.5, -1.0) == 100.0);
    CHECK(*gap_closed(-1.25, -1.5, -1.0) == doctest::Approx(50.0));
    CHECK_FALSE(gap_closed(3.0, 3.0, 3.0 + 1e-10).has_value());
    CHECK_THROWS_AS(gap_closed(-0.5, -1.5, -1.0), ContractViolation);
    CHECK_THROWS_AS(gap_closed(-1.6, -1.5, -1.0), ContractViolation);
    CHECK(*gap_closed(-1.5 - 1e-10, -1.5, -1.0) == 0.0);
    CHECK(*gap_closed(-1.0 + 1e-10, -1.5, -1.0) == 100.0);
}

TEST_CASE("integral relaxation stops immediately") {
    const auto result = run_cutting_loop(single_row_instance());
    REQUIRE(result.rounds.size() == 1);
    const auto& t = result.rounds[0];
    CHECK(t.round == 1);
    CHECK(t.termination == Termination::IntegralPoint);
    CHECK(t.cuts_added == 0);
    CHECK_FALSE(t.gap_closed.has_value());
    CHECK(result.z_lp == doctest::Approx(-2.0));
}

TEST_CASE("knapsack closes the whole gap") {
    const auto inst = knapsack_instance();
    const auto oracle = brute_force_optimum(inst, default_box(inst));
    CHECK(oracle.objective == doctest::Approx(-1.0));
    const auto result = run_cutting_loop(inst);
    CHECK(result.z_lp == doctest::Approx(-1.5));
    CHECK(result.z_integer == doctest::Approx(oracle.objective));
    REQUIRE(!result.rounds.empty());
    CHECK(result.rounds.size() <= 3);
    CHECK(result.rounds[0].cuts_added >= 1);
    // x1 <= 1 ties with x1 + x2 <= 1 in the separation objective, so round 1
    // may only move to the other LP vertex
    CHECK(*result.rounds[0].gap_closed >= 0.0);
    CHECK(*result.final_gap() == doctest::Approx(100.0));
    CHECK(result.termination() == Termination::IntegralPoint);
    for (const auto& cut : result.cuts) CHECK(validate_cut(cut, inst, default_box(inst)));
}

TEST_CASE("a selector rejecting every row finds nothing") {
    LoopConfig config;
    config.selector = [](std::span<const FeatureVector>) { return std::vector<Index>{}; };
    const auto result = run_cutting_loop(knapsack_instance(), config);
    REQUIRE(result.rounds.size() == 1);
    CHECK(result.rounds[0].termination == Termination::NoCutFound);
    CHECK(result.rounds[0].allowed_rows.empty());
    CHECK(*result.rounds[0].gap_closed == 0.0);
}

TEST_CASE("round cap and observer") {
    LoopConfig config;
    config.max_rounds = 1;
    Index seen = 0;
    config.observer = [&](const RoundContext& ctx) {
        CHECK(ctx.round == seen + 1);
        CHECK(ctx.lp.duals.size() >= ctx.instance.num_rows());
        ++seen;
    };
    std::mt19937_64 rng(21);
    int capped = 0;
    for (int trial = 0; trial < 40 && capped < 3; ++trial) {
        const auto inst = to_standard_form(random_tiny_mip(rng, TinyShape{3, 1, 2, 2}));
        seen = 0;
        const auto result = run_cutting_loop(inst, config);
        CHECK(result.rounds.size() == 1);
        if (result.termination() == Termination::MaxRounds) {
            ++capped;
            CHECK(seen == 1);
        }
    }
    CHECK(capped > 0);
}

TEST_CASE("config validation") {
    LoopConfig config;
    config.max_rounds = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.max_time = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.max_cuts_per_round = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.selector = [](std::span<const FeatureVector>) { return std::vector<Index>{7}; };
    CHECK_THROWS_AS(run_cutting_loop(knapsack_instance(), config), ShapeError);
}

TEST_CASE("random runs: monotone progress, valid cuts, trivial selector changes nothing") {
    std::mt19937_64 rng(8);
    int fractional = 0;
    for (int trial = 0; trial < 60 && fractional < 12; ++trial) {
        const auto inst = to_standard_form(random_tiny_mip(rng, TinyShape{3, 1, 2, 2}));
        const auto box = default_box(inst);
        const auto oracle = brute_force_optimum(inst, box);
        LoopConfig config;
        config.max_rounds = 6;
        const auto full = run_cutting_loop(inst, config);
        CHECK(full.z_integer == doctest::Approx(oracle.objective).epsilon(1e-9));
        if (full.rounds.size() == 1 && full.termination() == Termination::IntegralPoint) continue;
        ++fractional;

        for (std::size_t k = 0; k < full.rounds.size(); ++k) {
            const auto& t = full.rounds[k];
            CHECK(t.round == static_cast<Index>(k) + 1);
            CHECK(t.lp_objective <= oracle.objective + 1e-6);
            if (k > 0) {
                CHECK(t.lp_objective >= full.rounds[k - 1].lp_objective - 1e-7);
                if (t.gap_closed && full.rounds[k - 1].gap_closed)
                    CHECK(*t.gap_closed >= *full.rounds[k - 1].gap_closed - 1e-7);
            }
            if (t.gap_closed) {
                CHECK(*t.gap_closed >= 0.0);
                CHECK(*t.gap_closed <= 100.0);
            }
        }
        for (const auto& cut : full.cuts) CHECK(validate_cut(cut, inst, box));

        config.selector = [](std::span<const FeatureVector> fvs) {
            std::vector<Index> rows;
            for (const auto& fv : fvs) rows.push_back(fv.row);
            return rows;
        };
        const auto reduced = run_cutting_loop(inst, config);
        REQUIRE(reduced.rounds.size() == full.rounds.size());
        for (std::size_t k = 0; k < full.rounds.size(); ++k) {
            CHECK(reduced.rounds[k].cuts_added == full.rounds[k].cuts_added);
            CHECK(reduced.rounds[k].lp_objective == full.rounds[k].lp_objective);
            CHECK(reduced.rounds[k].termination == full.rounds[k].termination);
            CHECK(reduced.rounds[k].allowed_rows == full.rounds[k].allowed_rows);
        }
    }
    CHECK(fractional >= 5);
}
