#include "mirlab/features.hpp"

#include "mirlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mirlab {

namespace {

constexpr double kZeroTol = 1e-9;
constexpr double kBoundTol = 1e-6;

std::array<std::string, kFeatureCount> make_names() {
    std::array<std::string, kFeatureCount> names;
    std::size_t k = 0;
    for (const char* s : {"rhs", "rhs_nonzero", "slack", "slack_nonzero", "dual", "degree_all", "degree_nonzero",
                          "degree_zero", "sense_le", "sense_ge"})
        names[k++] = s;
    for (const char* group : {"coef", "ratio"})
        for (const char* subset : {"all", "nonzero", "zero", "at_ub"})
            for (const char* stat : {"mean", "std", "min", "max"})
                names[k++] = std::string(group) + "_" + stat + "_" + subset;
    for (const char* s : {"euclidean_distance", "relative_violation", "adjusted_distance", "objective_parallelism",
                          "cost_mean", "cost_std", "cost_min", "cost_max", "top_cost_1", "top_cost_5",
                          "top_cost_10", "top_cost_20"})
        names[k++] = s;
    return names;
}

// mean, population std, min, max; zeros for an empty set
std::array<double, 4> stats(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0, 0.0, 0.0};
    double sum = 0.0;
    double lo = values.front();
    double hi = values.front();
    for (double v : values) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return {mean, std::sqrt(var), lo, hi};
}

// linear interpolation between order statistics
double quantile(std::vector<double> sorted, double q) {
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
    static const auto names = make_names();
    return names;
}

FeatureVector compute_features(const MipInstance& instance, const Point& point, const LpSolution& lp, Index row) {
    if (row < 0 || row >= instance.num_rows()) throw ShapeError("features are defined for original rows only");
    if (lp.duals.size() < instance.num_rows()) throw ShapeError("LP duals do not cover the instance rows");
    const RowView view = evaluate_row(instance, row, point, lp.duals);

    // structural (non-slack) columns: coefficient, value, upper bound, cost, integrality
    struct Column {
        double coef;
        double value;
        double upper;
        double cost;
        bool integer;
    };
    std::vector<Column> columns;
    const Vector int_ub = instance.int_upper_bounds();
    const Vector cont_ub = instance.cont_upper_bounds();
    for (Index j = 0; j < instance.num_int_vars(); ++j)
        columns.push_back({view.int_coeffs(j), point.x(j), int_ub(j), instance.f(j), true});
    for (Index j = 0; j < instance.num_cont_vars(); ++j)
        if (!instance.is_slack(j)) columns.push_back({view.cont_coeffs(j), point.v(j), cont_ub(j), instance.g(j), false});

    const double rhs = view.rhs;
    std::array<std::vector<double>, 4> coef_sets;   // all, nonzero, zero, at upper bound
    std::array<std::vector<double>, 4> ratio_sets;
    std::vector<double> row_costs;
    double norm_sq = 0.0;
    double int_norm_sq = 0.0;
    double cost_dot = 0.0;
    double cost_norm_sq = 0.0;
    double max_abs_cost = 0.0;
    for (const auto& c : columns) {
        cost_norm_sq += c.cost * c.cost;
        max_abs_cost = std::max(max_abs_cost, std::abs(c.cost));
        if (c.coef == 0.0) continue;
        norm_sq += c.coef * c.coef;
        if (c.integer) int_norm_sq += c.coef * c.coef;
        cost_dot += c.coef * c.cost;
        row_costs.push_back(c.cost);
        const bool nonzero = std::abs(c.value) > kZeroTol;
        const bool at_upper = std::isfinite(c.upper) && std::abs(c.value - c.upper) <= kBoundTol;
        const double ratio = rhs != 0.0 ? c.coef / rhs : 0.0;
        coef_sets[0].push_back(c.coef);
        ratio_sets[0].push_back(ratio);
        const std::size_t at = nonzero ? 1 : 2;
        coef_sets[at].push_back(c.coef);
        ratio_sets[at].push_back(ratio);
        if (at_upper) {
            coef_sets[3].push_back(c.coef);
            ratio_sets[3].push_back(ratio);
        }
    }

    FeatureVector out;
    out.row = row;
    auto& f = out.values;
    Index k = 0;
    f(k++) = rhs;
    f(k++) = rhs != 0.0 ? 1.0 : 0.0;
    f(k++) = view.slack;
    f(k++) = std::abs(view.slack) > kZeroTol ? 1.0 : 0.0;
    f(k++) = view.dual;
    f(k++) = static_cast<double>(coef_sets[0].size());
    f(k++) = static_cast<double>(coef_sets[1].size());
    f(k++) = static_cast<double>(coef_sets[2].size());
    f(k++) = view.sense != RowSense::Greater ? 1.0 : 0.0;
    f(k++) = view.sense != RowSense::Less ? 1.0 : 0.0;
    for (const auto* sets : {&coef_sets, &ratio_sets})
        for (const auto& set : *sets)
            for (double s : stats(set)) f(k++) = s;

    const double gap = view.activity - rhs;
    const double norm = std::sqrt(norm_sq);
    const double int_norm = std::sqrt(int_norm_sq);
    f(k++) = norm > 0.0 ? std::abs(gap) / norm : 0.0;
    double relative = 0.0;
    if (rhs != 0.0) {
        switch (view.sense) {
        case RowSense::Less: relative = gap / std::abs(rhs); break;
        case RowSense::Greater: relative = -gap / std::abs(rhs); break;
        case RowSense::Equal: relative = std::abs(gap) / std::abs(rhs); break;
        }
    }
    f(k++) = relative;
    f(k++) = int_norm > 0.0 ? std::abs(gap) / int_norm : 0.0;
    const double cost_norm = std::sqrt(cost_norm_sq);
    f(k++) = norm > 0.0 && cost_norm > 0.0 ? std::abs(cost_dot) / (norm * cost_norm) : 0.0;
    for (double s : stats(row_costs)) f(k++) = s;

    if (max_abs_cost > 0.0) {
        std::vector<double> scaled;
        scaled.reserve(columns.size());
        for (const auto& c : columns) scaled.push_back(std::abs(c.cost) / max_abs_cost);
        for (double top : {0.01, 0.05, 0.10, 0.20}) {
            const double threshold = quantile(scaled, 1.0 - top);
            double count = 0.0;
            for (std::size_t j = 0; j < columns.size(); ++j)
                if (columns[j].coef != 0.0 && scaled[j] >= threshold) count += 1.0;
            f(k++) = count;
        }
    } else {
        for (int q = 0; q < 4; ++q) f(k++) = 0.0;
    }
    return out;
}

std::vector<FeatureVector> compute_all_features(const MipInstance& instance, const Point& point, const LpSolution& lp) {
    std::vector<FeatureVector> out;
    out.reserve(static_cast<std::size_t>(instance.num_rows()));
    for (Index r = 0; r < instance.num_rows(); ++r) out.push_back(compute_features(instance, point, lp, r));
    return out;
}

} // namespace mirlab
