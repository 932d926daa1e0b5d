#include "doctest.h"

#include "general_oracle.hpp"
#include "support.hpp"

#include "mirlab/errors.hpp"
#include "mirlab/oracle.hpp"

#include <random>

using namespace mirlab;
using namespace mirlab::testing;

TEST_CASE("single inequality gains one slack") {
    const MipInstance inst = single_row_instance();
    CHECK(inst.num_rows() == 1);
    CHECK(inst.num_int_vars() == 1);
    CHECK(inst.num_cont_vars() == 1);
    CHECK(inst.A(0, 0) == 1.0);
    CHECK(inst.C(0, 0) == 1.0);
    CHECK(inst.b(0) == 2.0);
    CHECK(inst.f(0) == -1.0);
    CHECK(inst.g(0) == 0.0);
    CHECK(inst.row_meta[0].sense == RowSense::Less);
    CHECK(inst.row_meta[0].slack == Index{0});
    CHECK(inst.is_slack(0));
}

TEST_CASE("equality instance passes through") {
    Matrix a(1, 2);
    a << 1, 1;
    Vector rhs(1);
    rhs << 4;
    Vector cost(2);
    cost << 1, 2;
    const auto inst = to_standard_form(make_mip(a, rhs, {RowSense::Equal}, cost, Vector::Constant(2, kInf), {1, 0}));
    CHECK(inst.num_rows() == 1);
    CHECK(inst.num_int_vars() == 1);
    CHECK(inst.num_cont_vars() == 1);
    CHECK_FALSE(inst.row_meta[0].slack.has_value());
    CHECK_FALSE(inst.is_slack(0));
    CHECK(inst.A(0, 0) == 1.0);
    CHECK(inst.C(0, 0) == 1.0);
}

TEST_CASE("upper bound becomes a row and keeps the optimum") {
    Matrix a(1, 1);
    a << 1;
    Vector rhs(1);
    rhs << 3;
    Vector cost(1);
    cost << -1;
    Vector upper(1);
    upper << 5;
    const auto general = make_mip(a, rhs, {RowSense::Less}, cost, upper, {1});
    const auto inst = to_standard_form(general);
    CHECK(inst.num_rows() == 2);
    CHECK(inst.num_cont_vars() == 2);
    CHECK(inst.row_meta[1].bound_of == Index{0});
    CHECK(inst.b(1) == 5.0);
    CHECK(inst.int_upper_bounds()(0) == 5.0);

    // x in {0..3}: optimum -3
    const auto before = general_brute_force(general);
    REQUIRE(before);
    CHECK(*before == doctest::Approx(-3.0));
    const auto after = brute_force_optimum(inst, default_box(inst));
    CHECK(after.objective == doctest::Approx(-3.0));
}

TEST_CASE("free and shifted variables are rejected") {
    auto mip = knapsack_general();
    mip.lower(0) = -kInf;
    CHECK_THROWS_AS(to_standard_form(mip), UnsupportedVariableDomain);
    mip.lower(0) = 1.0;
    CHECK_THROWS_AS(to_standard_form(mip), UnsupportedVariableDomain);
}

TEST_CASE("maximization is negated") {
    auto mip = knapsack_general();
    mip.maximize = true;
    mip.cost << 1, 1;
    const auto inst = to_standard_form(mip);
    CHECK(inst.negated_objective);
    CHECK(inst.f(0) == -1.0);
}

TEST_CASE("evaluate_row") {
    Matrix a(1, 2);
    a << 1, 2;
    Vector rhs(1);
    rhs << 4;
    const auto inst = to_standard_form(make_mip(a, rhs, {RowSense::Less}, Vector::Zero(2), Vector::Constant(2, kInf), {1, 1}));
    Point pt{Vector(2), Vector(1)};
    pt.x << 1.5, 1;
    pt.v << 0.5;
    Vector duals(1);
    duals << -0.25;

    SUBCASE("activity and slack") {
        const auto view = evaluate_row(inst, 0, pt, duals);
        CHECK(view.activity == doctest::Approx(3.5));
        CHECK(view.slack == doctest::Approx(0.5));
        CHECK(view.dual == -0.25);
        CHECK(view.cont_coeffs(0) == 0.0);
    }
    SUBCASE("zero row") {
        Matrix z = Matrix::Zero(1, 2);
        const auto zi = to_standard_form(make_mip(z, rhs, {RowSense::Less}, Vector::Zero(2), Vector::Constant(2, kInf), {1, 1}));
        const auto view = evaluate_row(zi, 0, pt);
        CHECK(view.activity == 0.0);
        CHECK(view.slack == 4.0);
    }
    SUBCASE("shape errors") {
        Point bad{Vector::Zero(3), Vector::Zero(1)};
        CHECK_THROWS_AS(evaluate_row(inst, 0, bad), ShapeError);
        CHECK_THROWS_AS(evaluate_row(inst, 1, pt), ShapeError);
    }
}

TEST_CASE("evaluate_row is linear in the point") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = to_standard_form(random_tiny_mip(rng));
        Point p{Vector(inst.num_int_vars()), Vector(inst.num_cont_vars())};
        Point q = p;
        for (Index j = 0; j < p.x.size(); ++j) p.x(j) = u(rng), q.x(j) = u(rng);
        for (Index j = 0; j < p.v.size(); ++j) p.v(j) = u(rng), q.v(j) = u(rng);
        const Point mid{0.5 * (p.x + q.x), 0.5 * (p.v + q.v)};
        for (Index r = 0; r < inst.num_rows(); ++r) {
            const double expected = 0.5 * (evaluate_row(inst, r, p).activity + evaluate_row(inst, r, q).activity);
            CHECK(evaluate_row(inst, r, mid).activity == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("standard form preserves the optimum on random tiny instances") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto general = random_tiny_mip(rng);
        const auto expected = general_brute_force(general);
        REQUIRE(expected);
        const auto inst = to_standard_form(general);
        const auto got = brute_force_optimum(inst, default_box(inst));
        CHECK(std::abs(got.objective - *expected) <= 1e-9);
    }
}
