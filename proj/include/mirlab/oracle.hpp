#pragma once

// Exhaustive oracles for tiny instances. They share no code with the simplex
// or branch-and-bound: the continuous part of every lattice point is handled by
// enumerating the vertices of {v >= 0 : Cv = b - Ax}.

#include "mirlab/model.hpp"

#include <cstddef>
#include <vector>

namespace mirlab {

inline constexpr std::size_t kMaxLatticePoints = 1'000'000;
inline constexpr Index kMaxOracleIntVars = 20;

/// Integer variable j ranges over {0, ..., upper[j]}.
struct EnumerationBox {
    std::vector<long> upper;

    std::size_t lattice_size() const;  // saturates at SIZE_MAX
};

/// Bound rows where present, `cap` elsewhere.
EnumerationBox default_box(const MipInstance& instance, long cap = 10);

struct OracleOptimum {
    double objective = 0.0;
    Point incumbent;
};

/// Throws EnumerationTooLarge, InfeasibleProblem, or UnboundedProblem.
OracleOptimum brute_force_optimum(const MipInstance& instance, const EnumerationBox& box);

/// Every lattice point in the box paired with every vertex of its continuous
/// restriction.
std::vector<Point> enumerate_feasible_points(const MipInstance& instance, const EnumerationBox& box);

} // namespace mirlab
