#include "mirlab/mir_sep.hpp"

#include "mirlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mirlab {

Vector SeparationConfig::epsilon_weights() const {
    Vector eps(bits);
    for (int k = 0; k < bits; ++k) eps(k) = std::ldexp(1.0, -(k + 1));
    return eps;
}

void SeparationConfig::validate() const {
    if (bits < 1) throw ConfigError("separation needs at least one expansion bit");
    if (!(lambda_bound > 0.0)) throw ConfigError("lambda bound must be positive");
    if (!(time_limit > 0.0)) throw ConfigError("separation time limit must be positive");
    if (node_limit <= 0) throw ConfigError("separation node limit must be positive");
    if (!(gap_tol > 0.0)) throw ConfigError("separation gap tolerance must be positive");
}

SeparationModel build_separation_model(const MipInstance& instance, const Point& point,
                                       const SeparationConfig& config) {
    config.validate();
    const Index m = instance.num_rows();
    const Index n = instance.num_int_vars();
    const Index p = instance.num_cont_vars();
    if (point.x.size() != n || point.v.size() != p) throw ShapeError("point does not match instance dimensions");

    SeparationModel model;
    model.layout = SeparationLayout{m, n, p, config.bits};
    model.point = point;
    model.epsilon = config.epsilon_weights();
    model.A = instance.A;
    model.C = instance.C;
    model.b = instance.b;
    const auto& lay = model.layout;
    const Index K = config.bits;
    const Index cols = lay.num_cols();
    const Index rows = p + n + 1 + 1 + 1 + K + K;
    const double L = config.lambda_bound;

    GeneralMip& mip = model.mip;
    mip.name = instance.name + "_mirsep";
    mip.maximize = true;
    mip.coefficients = Matrix::Zero(rows, cols);
    mip.rhs = Vector::Zero(rows);
    mip.senses.assign(static_cast<std::size_t>(rows), RowSense::Greater);
    mip.cost = Vector::Zero(cols);
    mip.lower = Vector::Zero(cols);
    mip.upper = Vector::Constant(cols, kInf);
    mip.integer.assign(static_cast<std::size_t>(cols), 0);

    // lambda in [-L, L], zero outside the allowed rows
    for (Index j = 0; j < m; ++j) {
        mip.lower(lay.lambda() + j) = -L;
        mip.upper(lay.lambda() + j) = L;
    }
    if (config.allowed_rows) {
        std::vector<char> allowed(static_cast<std::size_t>(m), 0);
        for (Index j : *config.allowed_rows) {
            if (j < 0 || j >= m) throw ShapeError("allowed row out of range");
            allowed[static_cast<std::size_t>(j)] = 1;
        }
        for (Index j = 0; j < m; ++j)
            if (!allowed[static_cast<std::size_t>(j)]) mip.lower(lay.lambda() + j) = mip.upper(lay.lambda() + j) = 0.0;
    }
    for (Index i = 0; i < n; ++i) {
        mip.upper(lay.alpha_hat() + i) = 1.0;
        const double box = std::ceil(L * instance.A.col(i).cwiseAbs().sum()) + 1.0;
        mip.lower(lay.alpha_bar() + i) = -box;
        mip.upper(lay.alpha_bar() + i) = box;
        mip.integer[static_cast<std::size_t>(lay.alpha_bar() + i)] = 1;
    }
    mip.upper(lay.beta_hat()) = 1.0;
    const double beta_box = std::ceil(L * instance.b.cwiseAbs().sum()) + 1.0;
    mip.lower(lay.beta_bar()) = -beta_box;
    mip.upper(lay.beta_bar()) = beta_box;
    mip.integer[static_cast<std::size_t>(lay.beta_bar())] = 1;
    for (Index k = 0; k < K; ++k) {
        mip.upper(lay.pi() + k) = 1.0;
        mip.integer[static_cast<std::size_t>(lay.pi() + k)] = 1;
    }

    // objective: sum eps_k Delta_k - (c+ v* + a^ x*)
    for (Index k = 0; k < K; ++k) mip.cost(lay.delta_k() + k) = model.epsilon(k);
    for (Index i = 0; i < p; ++i) mip.cost(lay.c_plus() + i) = -point.v(i);
    for (Index i = 0; i < n; ++i) mip.cost(lay.alpha_hat() + i) = -point.x(i);

    Index r = 0;
    for (Index i = 0; i < p; ++i, ++r) {  // c+_i - lambda C_i >= 0
        mip.coefficients(r, lay.c_plus() + i) = 1.0;
        for (Index j = 0; j < m; ++j) mip.coefficients(r, lay.lambda() + j) = -instance.C(j, i);
    }
    for (Index i = 0; i < n; ++i, ++r) {  // a^_i + a-_i - lambda A_i >= 0
        mip.coefficients(r, lay.alpha_hat() + i) = 1.0;
        mip.coefficients(r, lay.alpha_bar() + i) = 1.0;
        for (Index j = 0; j < m; ++j) mip.coefficients(r, lay.lambda() + j) = -instance.A(j, i);
    }
    // b^ + b- - lambda b <= 0
    mip.coefficients(r, lay.beta_hat()) = 1.0;
    mip.coefficients(r, lay.beta_bar()) = 1.0;
    for (Index j = 0; j < m; ++j) mip.coefficients(r, lay.lambda() + j) = -instance.b(j);
    mip.senses[static_cast<std::size_t>(r++)] = RowSense::Less;
    // b^ - sum eps_k pi_k >= 0
    mip.coefficients(r, lay.beta_hat()) = 1.0;
    for (Index k = 0; k < K; ++k) mip.coefficients(r, lay.pi() + k) = -model.epsilon(k);
    ++r;
    // Delta - b- + a- x* = 1
    mip.coefficients(r, lay.delta()) = 1.0;
    mip.coefficients(r, lay.beta_bar()) = -1.0;
    for (Index i = 0; i < n; ++i) mip.coefficients(r, lay.alpha_bar() + i) = point.x(i);
    mip.rhs(r) = 1.0;
    mip.senses[static_cast<std::size_t>(r++)] = RowSense::Equal;
    for (Index k = 0; k < K; ++k, ++r) {  // Delta_k - Delta <= 0
        mip.coefficients(r, lay.delta_k() + k) = 1.0;
        mip.coefficients(r, lay.delta()) = -1.0;
        mip.senses[static_cast<std::size_t>(r)] = RowSense::Less;
    }
    for (Index k = 0; k < K; ++k, ++r) {  // Delta_k - pi_k <= 0
        mip.coefficients(r, lay.delta_k() + k) = 1.0;
        mip.coefficients(r, lay.pi() + k) = -1.0;
        mip.senses[static_cast<std::size_t>(r)] = RowSense::Less;
    }
    return model;
}

SeparationSolution SeparationSolution::from_columns(const SeparationModel& model, const Vector& columns) {
    const auto& lay = model.layout;
    if (columns.size() != lay.num_cols()) throw ShapeError("column vector does not match separation layout");
    SeparationSolution sol;
    sol.lambda = columns.segment(lay.lambda(), lay.rows);
    sol.c_plus = columns.segment(lay.c_plus(), lay.conts);
    sol.alpha_hat = columns.segment(lay.alpha_hat(), lay.ints);
    sol.alpha_bar = columns.segment(lay.alpha_bar(), lay.ints);
    sol.beta_hat = columns(lay.beta_hat());
    sol.beta_bar = columns(lay.beta_bar());
    sol.pi = columns.segment(lay.pi(), lay.bits);
    sol.delta = columns(lay.delta());
    sol.delta_k = columns.segment(lay.delta_k(), lay.bits);
    sol.objective = separation_objective(model, sol);
    return sol;
}

Vector SeparationSolution::to_columns(const SeparationLayout& lay) const {
    Vector out(lay.num_cols());
    out.segment(lay.lambda(), lay.rows) = lambda;
    out.segment(lay.c_plus(), lay.conts) = c_plus;
    out.segment(lay.alpha_hat(), lay.ints) = alpha_hat;
    out.segment(lay.alpha_bar(), lay.ints) = alpha_bar;
    out(lay.beta_hat()) = beta_hat;
    out(lay.beta_bar()) = beta_bar;
    out.segment(lay.pi(), lay.bits) = pi;
    out(lay.delta()) = delta;
    out.segment(lay.delta_k(), lay.bits) = delta_k;
    return out;
}

double separation_objective(const SeparationModel& model, const SeparationSolution& sol) {
    return model.epsilon.dot(sol.delta_k) - (sol.c_plus.dot(model.point.v) + sol.alpha_hat.dot(model.point.x));
}

double separation_residual(const SeparationModel& model, const SeparationSolution& sol) {
    const auto& lay = model.layout;
    if (sol.lambda.size() != lay.rows || sol.c_plus.size() != lay.conts || sol.alpha_hat.size() != lay.ints ||
        sol.alpha_bar.size() != lay.ints || sol.pi.size() != lay.bits || sol.delta_k.size() != lay.bits)
        throw ShapeError("separation solution does not match model layout");

    double worst = 0.0;
    auto at_least = [&](double value, double bound) { worst = std::max(worst, bound - value); };
    auto integral = [&](double value) { worst = std::max(worst, std::abs(value - std::round(value))); };

    const Eigen::RowVectorXd lambda_t = sol.lambda.transpose();
    const Eigen::RowVectorXd lc = lambda_t * model.C;
    const Eigen::RowVectorXd la = lambda_t * model.A;
    for (Index i = 0; i < lay.conts; ++i) {
        at_least(sol.c_plus(i), lc(i));   // c+ >= lambda C
        at_least(sol.c_plus(i), 0.0);     // c+ >= 0
    }
    for (Index i = 0; i < lay.ints; ++i) {
        at_least(sol.alpha_hat(i) + sol.alpha_bar(i), la(i));
        at_least(sol.alpha_hat(i), 0.0);
        at_least(1.0, sol.alpha_hat(i));
        integral(sol.alpha_bar(i));
    }
    at_least(sol.lambda.dot(model.b), sol.beta_hat + sol.beta_bar);
    at_least(sol.beta_hat, 0.0);
    at_least(1.0, sol.beta_hat);
    at_least(sol.beta_hat, model.epsilon.dot(sol.pi));
    worst = std::max(worst, std::abs(sol.delta - (sol.beta_bar + 1.0 - sol.alpha_bar.dot(model.point.x))));
    integral(sol.beta_bar);
    for (Index k = 0; k < lay.bits; ++k) {
        at_least(sol.delta, sol.delta_k(k));
        at_least(sol.pi(k), sol.delta_k(k));
        at_least(sol.delta_k(k), 0.0);
        at_least(sol.pi(k), 0.0);
        at_least(1.0, sol.pi(k));
        integral(sol.pi(k));
    }
    return worst;
}

MirCut recover_cut(const SeparationModel& model, const SeparationSolution& sol) {
    const double residual = separation_residual(model, sol);
    if (residual > 1e-6)
        throw InfeasibleSolution("separation solution violates its constraints by " + std::to_string(residual));
    MirCut cut;
    cut.coeff_v = sol.c_plus;
    cut.coeff_x = sol.alpha_hat + sol.beta_hat * sol.alpha_bar;
    cut.rhs = sol.beta_hat * (sol.beta_bar + 1.0);
    cut.lambda = sol.lambda;
    return cut;
}

double true_violation(const MirCut& cut, const Point& point) {
    if (cut.coeff_x.size() != point.x.size() || cut.coeff_v.size() != point.v.size())
        throw ShapeError("cut does not match point dimensions");
    return cut.rhs - (cut.coeff_v.dot(point.v) + cut.coeff_x.dot(point.x));
}

namespace {

Vector normalized(const MirCut& cut) {
    Vector all(cut.coeff_x.size() + cut.coeff_v.size() + 1);
    all << cut.coeff_x, cut.coeff_v, cut.rhs;
    const double scale = all.cwiseAbs().maxCoeff();
    if (scale > 0) all /= scale;
    return all;
}

} // namespace

SeparationOutcome separate(const MipInstance& instance, const Point& point, const SeparationConfig& config) {
    config.validate();
    SeparationOutcome outcome;
    if (is_integral(point.x)) {
        outcome.status = MipStatus::Optimal;
        return outcome;
    }
    if (config.allowed_rows && config.allowed_rows->empty()) {
        outcome.status = MipStatus::Optimal;
        return outcome;
    }

    const SeparationModel model = build_separation_model(instance, point, config);
    SolverConfig solver;
    solver.time_limit = config.time_limit;
    solver.node_limit = config.node_limit;
    solver.gap_tol = config.gap_tol;
    const MipSolveResult result = solve_mip(model.mip, solver);
    outcome.status = result.status;
    outcome.nodes = result.node_count;
    outcome.elapsed = result.elapsed;

    std::vector<Vector> seen;
    for (const auto& incumbent : result.pool) {
        SeparationSolution sol = SeparationSolution::from_columns(model, incumbent.point);
        outcome.pool.push_back(sol);
        if (!(sol.objective > config.violation_cutoff)) continue;
        MirCut cut = recover_cut(model, sol);
        const Vector key = normalized(cut);
        const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const Vector& other) {
            return (other - key).cwiseAbs().maxCoeff() <= 1e-9;
        });
        if (duplicate) continue;
        seen.push_back(key);
        outcome.cuts.push_back(std::move(cut));
    }
    return outcome;
}

bool validate_cut(const MirCut& cut, const MipInstance& instance, const EnumerationBox& box) {
    for (const auto& point : enumerate_feasible_points(instance, box))
        if (true_violation(cut, point) > 1e-6) return false;
    return true;
}

} // namespace mirlab
