#pragma once

#include "mirlab/model.hpp"
#include "mirlab/simplex.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mirlab {

struct SolverConfig {
    double time_limit = 600.0;        // seconds
    double feasibility_tol = 1e-9;
    double integrality_tol = kIntegralityTol;
    double gap_tol = 1e-9;            // absolute optimality gap
    Index node_limit = 1'000'000;
    std::uint64_t seed = 0;

    /// Throws ConfigError.
    void validate() const;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Vector primal;          // one entry per model column
    double objective = 0.0; // in the model's own sense
    Vector duals;           // one per row, for the minimization form
    Vector reduced_costs;
    std::vector<Index> basis;
};

enum class MipStatus { Optimal, Feasible, Infeasible, Unbounded, TimeLimit, NodeLimit };

const char* to_string(MipStatus status);

struct Incumbent {
    Vector point;
    double objective = 0.0;
};

struct MipSolveResult {
    MipStatus status = MipStatus::Infeasible;
    Vector best_point;
    double best_objective = 0.0;
    std::vector<Incumbent> pool;  // every incumbent, strictly improving
    Index node_count = 0;
    double elapsed = 0.0;

    bool has_solution() const { return !pool.empty(); }
};

/// LP relaxation of `model` (integrality dropped). Rows of any sense; column
/// lower bounds must be finite.
LpSolution solve_lp(const GeneralMip& model, const SolverConfig& config = {});

/// Same, with column bounds overridden.
LpSolution solve_lp(const GeneralMip& model, const Vector& lower, const Vector& upper,
                    const SolverConfig& config = {});

LpSolution solve_lp(const MipInstance& instance, const SolverConfig& config = {});

/// Best-bound branch and bound. Columns listed in `fixed_to_zero` are held at 0.
MipSolveResult solve_mip(const GeneralMip& model, const SolverConfig& config = {},
                         std::span<const Index> fixed_to_zero = {});

MipSolveResult solve_mip(const MipInstance& instance, const SolverConfig& config = {},
                         std::span<const Index> fixed_to_zero = {});

} // namespace mirlab
