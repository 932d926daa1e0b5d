#pragma once

// Optimization-based separation of rank-1 mixed-integer rounding cuts.
//
// Given (x*, v*), the separation MIP chooses an aggregation vector lambda and
// the rounding data of the resulting MIR inequality
//
//     c+ v + a^ x + b^ a- x >= b^ (b- + 1)
//
// so as to maximize an underestimate of its violation at (x*, v*). The
// violation term b^ * Delta is linearized through binary expansion bits
// pi_k with weights 2^-k.

#include "mirlab/model.hpp"
#include "mirlab/oracle.hpp"
#include "mirlab/solver.hpp"

#include <optional>
#include <vector>

namespace mirlab {

struct SeparationConfig {
    int bits = 6;                     // number of expansion bits
    double lambda_bound = 1.0;        // |lambda_j| <= lambda_bound
    double time_limit = 600.0;
    Index node_limit = 1'000'000;
    double gap_tol = 1e-9;
    double violation_cutoff = 1e-4;
    std::optional<std::vector<Index>> allowed_rows;  // rows whose lambda may be nonzero

    /// 2^-k for k = 1..bits.
    Vector epsilon_weights() const;

    /// Throws ConfigError.
    void validate() const;
};

/// Column offsets of each variable block inside the separation MIP.
struct SeparationLayout {
    Index rows = 0;   // m of the source instance
    Index ints = 0;   // n
    Index conts = 0;  // p
    Index bits = 0;   // |K|

    Index lambda() const { return 0; }
    Index c_plus() const { return rows; }
    Index alpha_hat() const { return c_plus() + conts; }
    Index alpha_bar() const { return alpha_hat() + ints; }
    Index beta_hat() const { return alpha_bar() + ints; }
    Index beta_bar() const { return beta_hat() + 1; }
    Index pi() const { return beta_bar() + 1; }
    Index delta() const { return pi() + bits; }
    Index delta_k() const { return delta() + 1; }
    Index num_cols() const { return delta_k() + bits; }
};

struct SeparationModel {
    GeneralMip mip;
    SeparationLayout layout;
    Point point;
    Vector epsilon;
    Matrix A;  // source instance data, kept for residual checks
    Matrix C;
    Vector b;
};

struct SeparationSolution {
    Vector lambda;
    Vector c_plus;
    Vector alpha_hat;
    Vector alpha_bar;
    double beta_hat = 0.0;
    double beta_bar = 0.0;
    Vector pi;
    double delta = 0.0;
    Vector delta_k;
    double objective = 0.0;

    static SeparationSolution from_columns(const SeparationModel& model, const Vector& columns);
    Vector to_columns(const SeparationLayout& layout) const;
};

struct MirCut {
    Vector coeff_v;
    Vector coeff_x;
    double rhs = 0.0;
    Vector lambda;
    Index round = 0;
};

/// The separation MIP for `point`. Row groups in order: c+ >= lambda C,
/// a^ + a- >= lambda A, b^ + b- <= lambda b, b^ >= sum eps_k pi_k,
/// Delta = b- + 1 - a- x*, Delta_k <= Delta, Delta_k <= pi_k.
SeparationModel build_separation_model(const MipInstance& instance, const Point& point,
                                       const SeparationConfig& config);

/// Objective value of `sol` recomputed from its columns.
double separation_objective(const SeparationModel& model, const SeparationSolution& sol);

/// Largest violation of any separation constraint, domain, or integrality requirement.
double separation_residual(const SeparationModel& model, const SeparationSolution& sol);

/// Throws InfeasibleSolution when the residual exceeds 1e-6.
MirCut recover_cut(const SeparationModel& model, const SeparationSolution& sol);

/// rhs - (coeff_v v + coeff_x x); positive when the point is cut off.
double true_violation(const MirCut& cut, const Point& point);

struct SeparationOutcome {
    std::vector<MirCut> cuts;                 // deduplicated, one per kept incumbent
    std::vector<SeparationSolution> pool;     // every incumbent of the separation solve
    MipStatus status = MipStatus::Infeasible;
    Index nodes = 0;
    double elapsed = 0.0;
};

SeparationOutcome separate(const MipInstance& instance, const Point& point, const SeparationConfig& config);

/// True iff every oracle-enumerated feasible point satisfies the cut within 1e-6.
bool validate_cut(const MirCut& cut, const MipInstance& instance, const EnumerationBox& box);

} // namespace mirlab
