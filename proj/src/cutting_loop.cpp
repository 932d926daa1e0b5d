#include "mirlab/cutting_loop.hpp"

#include "mirlab/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace mirlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

LpSolution solve_relaxation(const GeneralMip& model) {
    LpSolution lp = solve_lp(model);
    switch (lp.status) {
    case LpStatus::Optimal: return lp;
    case LpStatus::Infeasible: throw InfeasibleProblem("LP relaxation is infeasible");
    case LpStatus::Unbounded: throw UnboundedProblem("LP relaxation is unbounded");
    case LpStatus::IterationLimit: break;
    }
    throw Error("LP relaxation hit the iteration limit");
}

double integer_optimum(const MipInstance& instance) {
    const auto result = solve_mip(instance);
    if (result.status == MipStatus::Infeasible) throw InfeasibleProblem("instance has no integer solution");
    if (result.status == MipStatus::Unbounded) throw UnboundedProblem("instance is unbounded");
    if (result.status != MipStatus::Optimal) throw Error("integer optimum not proven");
    return result.best_objective;
}

std::vector<Index> checked_selection(std::vector<Index> rows, Index m) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (!rows.empty() && (rows.front() < 0 || rows.back() >= m)) throw ShapeError("selector returned an unknown row");
    return rows;
}

void append_cut(GeneralMip& model, const MirCut& cut) {
    const Index rows = model.num_rows();
    const Index n = cut.coeff_x.size();
    model.coefficients.conservativeResize(rows + 1, Eigen::NoChange);
    model.coefficients.row(rows).head(n) = cut.coeff_x.transpose();
    model.coefficients.row(rows).tail(cut.coeff_v.size()) = cut.coeff_v.transpose();
    model.rhs.conservativeResize(rows + 1);
    model.rhs(rows) = cut.rhs;
    model.senses.push_back(RowSense::Greater);
    model.row_names.push_back("cut" + std::to_string(rows));
}

} // namespace

const char* to_string(Termination reason) {
    switch (reason) {
    case Termination::None: return "None";
    case Termination::IntegralPoint: return "IntegralPoint";
    case Termination::NoCutFound: return "NoCutFound";
    case Termination::SamePoint: return "SamePoint";
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::MaxRounds: return "MaxRounds";
    }
    return "?";
}

void LoopConfig::validate() const {
    if (!(max_time > 0.0)) throw ConfigError("loop time limit must be positive");
    if (!(sep_time_limit > 0.0)) throw ConfigError("separation time limit must be positive");
    if (max_rounds < 1) throw ConfigError("max rounds must be at least 1");
    if (!(same_point_tol >= 0.0)) throw ConfigError("same-point tolerance must be nonnegative");
    if (max_cuts_per_round && *max_cuts_per_round < 1) throw ConfigError("cut cap must be at least 1");
    separation.validate();
}

std::optional<double> gap_closed(double z, double z_lp, double z_i, double tol) {
    if (std::abs(z_i - z_lp) <= 1e-9) return std::nullopt;
    const double lo = std::min(z_lp, z_i);
    const double hi = std::max(z_lp, z_i);
    if (z < lo - tol || z > hi + tol)
        throw ContractViolation("objective " + std::to_string(z) + " lies outside [" + std::to_string(z_lp) + ", " +
                                std::to_string(z_i) + "]");
    return std::clamp(100.0 * (z - z_lp) / (z_i - z_lp), 0.0, 100.0);
}

LoopResult run_cutting_loop(const MipInstance& instance, const LoopConfig& config) {
    instance.validate();
    config.validate();
    const auto start = Clock::now();
    const Index m = instance.num_rows();
    const Index width = instance.num_cols();

    LoopResult result;
    GeneralMip model = instance.as_general();
    LpSolution lp = solve_relaxation(model);
    result.z_lp = lp.objective;
    result.z_integer = config.z_integer ? *config.z_integer : integer_optimum(instance);
    const double tol = 1e-6 * std::max(1.0, std::abs(result.z_integer));
    auto gap = [&](double z) { return gap_closed(z, result.z_lp, result.z_integer, tol); };

    std::vector<Index> all_rows(static_cast<std::size_t>(m));
    for (Index r = 0; r < m; ++r) all_rows[static_cast<std::size_t>(r)] = r;

    Point point = Point::split(instance, lp.primal.head(width));
    for (Index round = 1;; ++round) {
        RoundTrace trace;
        trace.round = round;
        trace.point = point;
        trace.lp_objective = lp.objective;
        trace.gap_closed = gap(lp.objective);
        if (is_integral(point.x)) {
            trace.termination = Termination::IntegralPoint;
            result.rounds.push_back(std::move(trace));
            break;
        }

        SeparationConfig sep = config.separation;
        if (config.selector) {
            const auto features = compute_all_features(instance, point, lp);
            trace.allowed_rows = checked_selection(config.selector(features), m);
            sep.allowed_rows = trace.allowed_rows;
        } else {
            trace.allowed_rows = all_rows;
            sep.allowed_rows.reset();
        }
        const double remaining = config.max_time - seconds_since(start);
        sep.time_limit = std::max(1e-3, std::min(config.sep_time_limit, remaining));

        const SeparationOutcome outcome = separate(instance, point, sep);
        trace.sep_seconds = outcome.elapsed;
        trace.sep_status = outcome.status;
        if (config.observer) config.observer(RoundContext{round, instance, point, lp, outcome, trace.allowed_rows});
        if (outcome.cuts.empty()) {
            trace.termination = Termination::NoCutFound;
            result.rounds.push_back(std::move(trace));
            break;
        }

        std::size_t count = outcome.cuts.size();
        if (config.max_cuts_per_round) count = std::min(count, static_cast<std::size_t>(*config.max_cuts_per_round));
        for (std::size_t k = 0; k < count; ++k) {
            MirCut cut = outcome.cuts[k];
            cut.round = round;
            append_cut(model, cut);
            result.cuts.push_back(std::move(cut));
        }
        const double before = lp.objective;
        lp = solve_relaxation(model);
        // cuts cannot lower the bound; smaller drops are re-solve noise
        if (lp.objective < before && before - lp.objective <= 1e-9 * std::max(1.0, std::abs(before)))
            lp.objective = before;
        trace.cuts_added = static_cast<Index>(count);
        trace.lp_objective = lp.objective;
        trace.gap_closed = gap(lp.objective);

        Point next = Point::split(instance, lp.primal.head(width));
        const double moved = (next.stacked() - point.stacked()).lpNorm<Eigen::Infinity>();
        if (moved <= config.same_point_tol) {
            trace.termination = Termination::SamePoint;
            result.rounds.push_back(std::move(trace));
            break;
        }
        result.rounds.push_back(std::move(trace));
        point = std::move(next);
        if (seconds_since(start) >= config.max_time) {
            result.rounds.back().termination = Termination::TimeLimit;
            break;
        }
        if (round >= config.max_rounds) {
            result.rounds.back().termination = Termination::MaxRounds;
            break;
        }
    }
    result.elapsed = seconds_since(start);
    return result;
}

} // namespace mirlab
