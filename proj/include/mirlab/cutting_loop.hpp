#pragma once

// Rounds of LP solve, MIR separation over the original rows, and cut
// addition, with an optional learned row selector restricting the
// aggregation support.

#include "mirlab/features.hpp"
#include "mirlab/mir_sep.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mirlab {

enum class Termination { None, IntegralPoint, NoCutFound, SamePoint, TimeLimit, MaxRounds };

const char* to_string(Termination reason);

/// Returns the rows whose multipliers may be nonzero.
using RowSelector = std::function<std::vector<Index>(std::span<const FeatureVector>)>;

struct RoundContext {
    Index round = 0;
    const MipInstance& instance;
    const Point& point;
    const LpSolution& lp;
    const SeparationOutcome& outcome;
    const std::vector<Index>& allowed_rows;
};

struct LoopConfig {
    double max_time = 3.0 * 3600.0;
    double sep_time_limit = 600.0;
    Index max_rounds = 1000;
    double same_point_tol = 1e-9;
    std::optional<Index> max_cuts_per_round;  // unlimited when empty
    SeparationConfig separation;              // time limit and allowed rows are overridden per round
    RowSelector selector;                     // all rows when empty
    std::optional<double> z_integer;          // solved by branch and bound when empty
    std::function<void(const RoundContext&)> observer;

    /// Throws ConfigError.
    void validate() const;
};

struct RoundTrace {
    Index round = 0;
    Point point;                       // the point separated in this round
    Index cuts_added = 0;
    double lp_objective = 0.0;         // after this round's cuts
    std::optional<double> gap_closed;  // empty when z_I = z_LP
    std::vector<Index> allowed_rows;
    double sep_seconds = 0.0;
    std::optional<MipStatus> sep_status;  // empty when no separation ran this round
    Termination termination = Termination::None;
};

struct LoopResult {
    std::vector<RoundTrace> rounds;
    double z_lp = 0.0;
    double z_integer = 0.0;
    std::vector<MirCut> cuts;
    double elapsed = 0.0;

    Termination termination() const { return rounds.empty() ? Termination::None : rounds.back().termination; }
    std::optional<double> final_gap() const { return rounds.empty() ? std::nullopt : rounds.back().gap_closed; }
};

/// 100 (z - z_lp) / (z_i - z_lp) clamped to [0, 100]; empty when
/// |z_i - z_lp| <= 1e-9. Throws ContractViolation when z lies outside
/// [z_lp, z_i] by more than `tol`.
std::optional<double> gap_closed(double z, double z_lp, double z_i, double tol = 1e-9);

LoopResult run_cutting_loop(const MipInstance& instance, const LoopConfig& config = {});

} // namespace mirlab
