#include "mirlab/solver.hpp"

#include "mirlab/errors.hpp"

#include <chrono>
#include <cmath>
#include <queue>

namespace mirlab {

void SolverConfig::validate() const {
    if (!(time_limit > 0.0)) throw ConfigError("time_limit must be positive");
    if (!(feasibility_tol > 0.0) || !(integrality_tol > 0.0) || !(gap_tol > 0.0))
        throw ConfigError("tolerances must be positive");
    if (node_limit <= 0) throw ConfigError("node_limit must be positive");
}

const char* to_string(MipStatus status) {
    switch (status) {
    case MipStatus::Optimal: return "Optimal";
    case MipStatus::Feasible: return "Feasible";
    case MipStatus::Infeasible: return "Infeasible";
    case MipStatus::Unbounded: return "Unbounded";
    case MipStatus::TimeLimit: return "TimeLimit";
    case MipStatus::NodeLimit: return "NodeLimit";
    }
    return "?";
}

namespace {

// Equality form of `model` with one slack per inequality row; bounds are set per solve.
LinearProgram<double> build_lp(const GeneralMip& model) {
    const Index m = model.num_rows();
    const Index n = model.num_cols();
    Index slacks = 0;
    for (auto s : model.senses)
        if (s != RowSense::Equal) ++slacks;

    LinearProgram<double> lp;
    lp.A = Matrix::Zero(m, n + slacks);
    lp.A.leftCols(n) = model.coefficients;
    lp.b = model.rhs;
    lp.cost = Vector::Zero(n + slacks);
    lp.cost.head(n) = model.maximize ? Vector(-model.cost) : model.cost;
    lp.lower = Vector::Zero(n + slacks);
    lp.upper = Vector::Constant(n + slacks, kInf);
    Index next = n;
    for (Index i = 0; i < m; ++i) {
        const RowSense s = model.senses[static_cast<std::size_t>(i)];
        if (s == RowSense::Equal) continue;
        lp.A(i, next++) = s == RowSense::Less ? 1.0 : -1.0;
    }
    return lp;
}

LpSolution run_lp(const GeneralMip& model, LinearProgram<double>& lp, const Vector& lower, const Vector& upper,
                  RevisedSimplex<double>& simplex, const WarmStart<double>* warm, WarmStart<double>* warm_out) {
    const Index n = model.num_cols();
    lp.lower.head(n) = lower;
    lp.upper.head(n) = upper;
    auto result = simplex.solve(lp, warm);

    LpSolution out;
    out.status = result.status;
    if (result.status != LpStatus::Optimal) return out;
    out.primal = result.x.head(n);
    out.objective = model.cost.dot(out.primal);
    out.duals = result.duals;
    out.reduced_costs = result.reduced_costs.head(n);
    out.basis = result.basis;
    if (warm_out) *warm_out = std::move(result.warm);
    return out;
}

RevisedSimplex<double>::Options simplex_options(const SolverConfig& config) {
    RevisedSimplex<double>::Options options;
    options.feasibility_tol = config.feasibility_tol;
    return options;
}

} // namespace

LpSolution solve_lp(const GeneralMip& model, const Vector& lower, const Vector& upper, const SolverConfig& config) {
    const Index n = model.num_cols();
    if (lower.size() != n || upper.size() != n) throw ShapeError("bound vectors do not match columns");
    LinearProgram<double> lp = build_lp(model);
    RevisedSimplex<double> simplex(simplex_options(config));
    return run_lp(model, lp, lower, upper, simplex, nullptr, nullptr);
}

LpSolution solve_lp(const GeneralMip& model, const SolverConfig& config) {
    return solve_lp(model, model.lower, model.upper, config);
}

LpSolution solve_lp(const MipInstance& instance, const SolverConfig& config) {
    return solve_lp(instance.as_general(), config);
}

namespace {

struct Node {
    double bound;
    Index depth;
    Index id;
    Vector lower;
    Vector upper;
    Vector primal;
    WarmStart<double> warm;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id > b.id;
    }
};

} // namespace

MipSolveResult solve_mip(const GeneralMip& model, const SolverConfig& config, std::span<const Index> fixed_to_zero) {
    config.validate();
    model.validate();
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const Index n = model.num_cols();
    const double sign = model.maximize ? -1.0 : 1.0;

    MipSolveResult result;
    Vector lower = model.lower;
    Vector upper = model.upper;
    for (Index j : fixed_to_zero) {
        if (j < 0 || j >= n) throw ShapeError("fixed column out of range");
        if (lower(j) > 0.0) {
            result.status = MipStatus::Infeasible;
            return result;
        }
        lower(j) = std::max(lower(j), 0.0);
        upper(j) = 0.0;
    }
    // integer columns get integral bounds
    for (Index j = 0; j < n; ++j) {
        if (!model.integer[static_cast<std::size_t>(j)]) continue;
        lower(j) = std::ceil(lower(j) - config.integrality_tol);
        if (std::isfinite(upper(j))) upper(j) = std::floor(upper(j) + config.integrality_tol);
        if (lower(j) > upper(j)) {
            result.status = MipStatus::Infeasible;
            return result;
        }
    }

    double incumbent = kInf;
    bool unbounded = false;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    Index next_id = 0;
    LinearProgram<double> program = build_lp(model);
    RevisedSimplex<double> simplex(simplex_options(config));

    auto evaluate = [&](Vector lo, Vector up, Index depth, const WarmStart<double>* parent) {
        ++result.node_count;
        WarmStart<double> warm;
        LpSolution lp = run_lp(model, program, lo, up, simplex, parent, &warm);
        if (lp.status == LpStatus::Infeasible) return;
        if (lp.status == LpStatus::Unbounded) {
            unbounded = true;
            return;
        }
        if (lp.status != LpStatus::Optimal) throw Error("LP relaxation hit the iteration limit");
        const double bound = sign * lp.objective;
        if (bound >= incumbent - config.gap_tol) return;

        Index branch = -1;
        double most = config.integrality_tol;
        for (Index j = 0; j < n; ++j) {
            if (!model.integer[static_cast<std::size_t>(j)]) continue;
            const double frac = lp.primal(j) - std::floor(lp.primal(j));
            const double dist = std::min(frac, 1.0 - frac);
            if (dist > most) {
                most = dist;
                branch = j;
            }
        }
        if (branch < 0) {
            Vector point = lp.primal;
            for (Index j = 0; j < n; ++j)
                if (model.integer[static_cast<std::size_t>(j)]) point(j) = std::round(point(j));
            const double value = sign * model.cost.dot(point);
            if (value < incumbent) {
                incumbent = value;
                result.pool.push_back(Incumbent{point, model.cost.dot(point)});
            }
            return;
        }
        open.push(Node{bound, depth, next_id++, std::move(lo), std::move(up), std::move(lp.primal), std::move(warm)});
    };

    evaluate(lower, upper, 0, nullptr);
    bool stopped = false;
    while (!open.empty() && !unbounded) {
        if (open.top().bound >= incumbent - config.gap_tol) break;
        if (elapsed() > config.time_limit) {
            result.status = MipStatus::TimeLimit;
            stopped = true;
            break;
        }
        if (result.node_count >= config.node_limit) {
            result.status = MipStatus::NodeLimit;
            stopped = true;
            break;
        }
        Node node = open.top();
        open.pop();

        Index branch = -1;
        double most = config.integrality_tol;
        for (Index j = 0; j < n; ++j) {
            if (!model.integer[static_cast<std::size_t>(j)]) continue;
            const double frac = node.primal(j) - std::floor(node.primal(j));
            const double dist = std::min(frac, 1.0 - frac);
            if (dist > most) {
                most = dist;
                branch = j;
            }
        }
        const double value = node.primal(branch);
        Vector down_upper = node.upper;
        down_upper(branch) = std::floor(value);
        evaluate(node.lower, std::move(down_upper), node.depth + 1, &node.warm);
        Vector up_lower = node.lower;
        up_lower(branch) = std::ceil(value);
        evaluate(std::move(up_lower), node.upper, node.depth + 1, &node.warm);
    }

    if (unbounded) {
        result.status = MipStatus::Unbounded;
    } else if (!stopped) {
        result.status = result.pool.empty() ? MipStatus::Infeasible : MipStatus::Optimal;
    } else if (result.status == MipStatus::NodeLimit && !result.pool.empty()) {
        result.status = MipStatus::Feasible;
    }
    if (!result.pool.empty()) {
        result.best_point = result.pool.back().point;
        result.best_objective = result.pool.back().objective;
    }
    result.elapsed = elapsed();
    return result;
}

MipSolveResult solve_mip(const MipInstance& instance, const SolverConfig& config, std::span<const Index> fixed_to_zero) {
    return solve_mip(instance.as_general(), config, fixed_to_zero);
}

} // namespace mirlab
