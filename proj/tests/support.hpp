#pragma once

// Fixtures and random instance generators shared by the unit and acceptance
// suites.

#include "mirlab/model.hpp"

#include <random>
#include <vector>

namespace mirlab::testing {

GeneralMip make_mip(const Matrix& coefficients, const Vector& rhs, std::vector<RowSense> senses, const Vector& cost,
                    const Vector& upper, std::vector<char> integer);

/// min -x1 - x2  s.t.  2 x1 + 2 x2 <= 3,  x integer >= 0.
GeneralMip knapsack_general();
MipInstance knapsack_instance();

/// min -x  s.t.  x <= 2,  x integer >= 0.
MipInstance single_row_instance();

struct TinyShape {
    int max_int_vars = 4;
    int max_cont_vars = 1;
    int max_rows = 3;
    int max_upper = 3;
};

/// Feasible, bounded random MIP: every column has a finite upper bound and
/// right-hand sides are built around a random lattice point.
GeneralMip random_tiny_mip(std::mt19937_64& rng, const TinyShape& shape = {});

} // namespace mirlab::testing
