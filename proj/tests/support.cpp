#include "support.hpp"

namespace mirlab::testing {

GeneralMip make_mip(const Matrix& coefficients, const Vector& rhs, std::vector<RowSense> senses, const Vector& cost,
                    const Vector& upper, std::vector<char> integer) {
    GeneralMip mip;
    mip.name = "fixture";
    mip.coefficients = coefficients;
    mip.rhs = rhs;
    mip.senses = std::move(senses);
    mip.cost = cost;
    mip.lower = Vector::Zero(coefficients.cols());
    mip.upper = upper;
    mip.integer = std::move(integer);
    return mip;
}

GeneralMip knapsack_general() {
    Matrix a(1, 2);
    a << 2, 2;
    Vector rhs(1);
    rhs << 3;
    Vector cost(2);
    cost << -1, -1;
    auto mip = make_mip(a, rhs, {RowSense::Less}, cost, Vector::Constant(2, kInf), {1, 1});
    mip.name = "knapsack";
    return mip;
}

MipInstance knapsack_instance() { return to_standard_form(knapsack_general()); }

MipInstance single_row_instance() {
    Matrix a(1, 1);
    a << 1;
    Vector rhs(1);
    rhs << 2;
    Vector cost(1);
    cost << -1;
    return to_standard_form(make_mip(a, rhs, {RowSense::Less}, cost, Vector::Constant(1, kInf), {1}));
}

GeneralMip random_tiny_mip(std::mt19937_64& rng, const TinyShape& shape) {
    std::uniform_int_distribution<int> int_count(1, shape.max_int_vars);
    std::uniform_int_distribution<int> cont_count(0, shape.max_cont_vars);
    std::uniform_int_distribution<int> row_count(1, shape.max_rows);
    std::uniform_int_distribution<int> coef(-3, 5);
    std::uniform_int_distribution<int> cost_draw(-6, 4);
    std::uniform_int_distribution<int> upper_draw(1, shape.max_upper);
    std::uniform_int_distribution<int> sense_draw(0, 5);
    std::uniform_int_distribution<int> half(0, 3);

    const int n = int_count(rng);
    const int p = cont_count(rng);
    const int m = row_count(rng);
    const int cols = n + p;

    Vector upper(cols);
    Vector anchor(cols);
    for (int j = 0; j < cols; ++j) {
        upper(j) = upper_draw(rng);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(upper(j)));
        anchor(j) = pick(rng);
    }
    Matrix a(m, cols);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = coef(rng);
    Vector rhs(m);
    std::vector<RowSense> senses;
    for (int i = 0; i < m; ++i) {
        const double activity = a.row(i).dot(anchor);
        const double slack = 0.5 * half(rng);
        if (sense_draw(rng) == 0) {
            senses.push_back(RowSense::Greater);
            rhs(i) = activity - slack;
        } else {
            senses.push_back(RowSense::Less);
            rhs(i) = activity + slack + 0.5;
        }
    }
    Vector cost(cols);
    for (int j = 0; j < cols; ++j) cost(j) = cost_draw(rng);
    std::vector<char> integer(static_cast<std::size_t>(cols), 0);
    for (int j = 0; j < n; ++j) integer[static_cast<std::size_t>(j)] = 1;
    auto mip = make_mip(a, rhs, std::move(senses), cost, upper, std::move(integer));
    mip.name = "tiny";
    return mip;
}

} // namespace mirlab::testing
