#include "doctest.h"

#include "support.hpp"

#include "mirlab/errors.hpp"
#include "mirlab/instance_gen.hpp"

#include <random>
#include <set>

using namespace mirlab;
using namespace mirlab::testing;

namespace {

// min 3 x1 - 2 x2 s.t. x1 + x2 <= 4 (the slack has zero cost)
MipInstance signed_instance() {
    Matrix A(1, 2);
    A << 1, 1;
    Vector cost(2);
    cost << 3, -2;
    return to_standard_form(make_mip(A, Vector::Constant(1, 4.0), {RowSense::Less}, cost, Vector::Constant(2, kInf),
                                     {1, 1}));
}

// min -(5, 4, 3, 7, 2) x  s.t.  2 x1 + 3 x2 + x3 + 4 x4 + 2 x5 <= 6, x <= 1
MipInstance knapsack5() {
    Matrix A(1, 5);
    A << 2, 3, 1, 4, 2;
    Vector cost(5);
    cost << -5, -4, -3, -7, -2;
    return to_standard_form(make_mip(A, Vector::Constant(1, 6.0), {RowSense::Less}, cost, Vector::Constant(5, 1.0),
                                     {1, 1, 1, 1, 1}));
}

} // namespace

TEST_CASE("empirical moments use the population std of each sign pool") {
    Vector d(5);
    d << 1, 3, -2, 0, -4;
    const auto pos = empirical_moments(d, 1);
    const auto neg = empirical_moments(d, -1);
    CHECK(pos.mean == 2.0);
    CHECK(pos.stddev == 1.0);
    CHECK(neg.mean == -3.0);
    CHECK(neg.stddev == 1.0);
    const auto none = empirical_moments(Vector::Zero(3), 1);
    CHECK(none.mean == 0.0);
    CHECK(none.stddev == 0.0);
}

TEST_CASE("zero objective stays zero") {
    std::mt19937_64 rng(1);
    const Vector out = perturb_objective(Vector::Zero(4), PoolMoments{1, 1}, PoolMoments{-1, 1}, rng);
    CHECK(out.isZero(0.0));
}

TEST_CASE("zero std pins each pool to its clipped mean") {
    Vector d(4);
    d << 3, -2, 0, 7;
    std::mt19937_64 rng(1);
    Vector out = perturb_objective(d, PoolMoments{2.5, 0}, PoolMoments{-0.5, 0}, rng);
    CHECK(out(0) == 2.5);
    CHECK(out(1) == -0.5);
    CHECK(out(2) == 0.0);
    CHECK(out(3) == 2.5);
    out = perturb_objective(d, PoolMoments{-1.0, 0}, PoolMoments{2.0, 0}, rng);
    CHECK(out(0) == 0.0);
    CHECK(out(1) == 0.0);
}

TEST_CASE("seeded draws replay: d = (3, -2, 0)") {
    Vector d(3);
    d << 3, -2, 0;
    const PoolMoments pos{2.0, 1.0};
    const PoolMoments neg{-1.0, 0.5};
    auto replay = draw_stream(42, 0);
    const double u1 = std::normal_distribution<double>(pos.mean, pos.stddev)(replay);
    const double u2 = std::normal_distribution<double>(neg.mean, neg.stddev)(replay);
    auto rng = draw_stream(42, 0);
    const Vector out = perturb_objective(d, pos, neg, rng);
    CHECK(out(0) == std::max(0.0, u1));
    CHECK(out(1) == std::min(0.0, u2));
    CHECK(out(2) == 0.0);
}

TEST_CASE("signs are preserved over many draws and draws are reproducible") {
    const auto inst = signed_instance();
    PerturbationConfig config;
    config.seed = 7;
    config.positive = PoolMoments{0.5, 3.0};
    config.negative = PoolMoments{-0.5, 3.0};
    const Vector base = inst.cost();
    int clipped = 0;
    for (std::uint64_t draw = 0; draw < 200; ++draw) {
        const Vector d = perturb_objective(inst, config, draw);
        CHECK(d == perturb_objective(inst, config, draw));
        for (Index j = 0; j < d.size(); ++j) {
            CHECK(d(j) * base(j) >= 0.0);
            if (base(j) == 0.0) CHECK(d(j) == 0.0);
            if (base(j) != 0.0 && d(j) == 0.0) ++clipped;
        }
    }
    CHECK(clipped > 0);
    CHECK(perturb_objective(inst, config, 0) != perturb_objective(inst, config, 1));
}

TEST_CASE("invalid configs are rejected") {
    PerturbationConfig config;
    config.count = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.count = 1;
    config.positive = PoolMoments{0.0, -1.0};
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("knapsack family of five distinct optima") {
    const auto base = knapsack5();
    PerturbationConfig config;
    config.seed = 3;
    config.count = 5;
    const auto family = generate_family(base, config);
    REQUIRE(family.variations.size() == 5);
    std::set<std::vector<long long>> prints;
    for (Index k = 0; k < 5; ++k) {
        const auto& v = family.variations[static_cast<std::size_t>(k)];
        prints.insert(v.fingerprint);
        const auto inst = family.instance(k);
        CHECK(inst.A == base.A);
        CHECK(inst.C == base.C);
        CHECK(inst.b == base.b);
        CHECK(inst.cost() == v.cost);
    }
    CHECK(prints.size() == 5);

    const auto again = generate_family(base, config, true, 3);
    REQUIRE(again.variations.size() == 5);
    CHECK(again.draws == family.draws);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(again.variations[k].draw == family.variations[k].draw);
        CHECK(again.variations[k].cost == family.variations[k].cost);
    }
}

TEST_CASE("count 1 and non-distinct families") {
    const auto base = knapsack_instance();
    PerturbationConfig config;
    config.count = 1;
    CHECK(generate_family(base, config).variations.size() == 1);
    config.count = 4;
    const auto family = generate_family(single_row_instance(), config, false);
    CHECK(family.variations.size() == 4);
    CHECK(family.draws == 4);
}

TEST_CASE("a single feasible point exhausts the draws") {
    // x1 + x2 = 0 forces the origin whatever the objective
    Matrix A(1, 2);
    A << 1, 1;
    const auto base = to_standard_form(make_mip(A, Vector::Zero(1), {RowSense::Equal}, Vector::Constant(2, 1.0),
                                                Vector::Constant(2, kInf), {1, 1}));
    PerturbationConfig config;
    config.count = 2;
    CHECK_THROWS_AS(generate_family(base, config), ExhaustedDraws);
}

TEST_CASE("gap filter keeps final gap >= threshold") {
    LoopResult zero, full, boundary, degenerate;
    RoundTrace t;
    t.gap_closed = 0.0;
    zero.rounds.push_back(t);
    t.gap_closed = 100.0;
    full.rounds.push_back(t);
    t.gap_closed = 5.0;
    boundary.rounds.push_back(t);
    t.gap_closed.reset();
    degenerate.rounds.push_back(t);
    CHECK_FALSE(passes_gap_filter(zero, 5.0));
    CHECK(passes_gap_filter(full, 5.0));
    CHECK(passes_gap_filter(boundary, 5.0));
    CHECK_FALSE(passes_gap_filter(degenerate, 5.0));
}

TEST_CASE("filter_by_gap partitions a knapsack family") {
    PerturbationConfig config;
    config.seed = 11;
    config.count = 3;
    const auto family = generate_family(knapsack5(), config);
    const auto parts = filter_by_gap(family, LoopConfig{}, 5.0, 2);
    CHECK(parts.runs.size() == 3);
    CHECK(parts.kept.size() + parts.discarded.size() == 3);
    for (Index k : parts.kept) CHECK(*parts.runs[static_cast<std::size_t>(k)].final_gap() >= 5.0);
    for (Index k : parts.discarded) CHECK_FALSE(passes_gap_filter(parts.runs[static_cast<std::size_t>(k)], 5.0));
}

TEST_CASE("manifest round trip") {
    PerturbationConfig config;
    config.seed = 5;
    config.count = 3;
    const auto family = generate_family(knapsack5(), config);
    const auto text = family_manifest(family, "base.mps");
    const auto back = read_family_manifest(text);
    CHECK(back.base_path == "base.mps");
    CHECK(back.config.seed == 5);
    CHECK(back.config.count == 3);
    REQUIRE(back.variations.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back.variations[k].cost == family.variations[k].cost);
        CHECK(back.variations[k].draw == family.variations[k].draw);
    }
    CHECK_THROWS_AS(read_family_manifest("{}"), SchemaMismatch);
}
