#pragma once

#include "mirlab/model.hpp"
#include "mirlab/solver.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace mirlab {

inline constexpr Index kFeatureCount = 54;

/// Frozen feature order; bump when the order or any formula changes.
inline constexpr std::string_view kFeatureSchema = "mirlab.features.v1";

using FeatureValues = Eigen::Matrix<double, kFeatureCount, 1>;

/// Column names in output order:
///   rhs, rhs_nonzero, slack, slack_nonzero, dual,
///   degree_{all,nonzero,zero}, sense_{le,ge},
///   coef_{mean,std,min,max}_{all,nonzero,zero,at_ub},
///   ratio_{mean,std,min,max}_{all,nonzero,zero,at_ub},
///   euclidean_distance, relative_violation, adjusted_distance,
///   objective_parallelism, cost_{mean,std,min,max},
///   top_cost_{1,5,10,20}
const std::array<std::string, kFeatureCount>& feature_names();

struct FeatureVector {
    FeatureValues values = FeatureValues::Zero();
    Index row = 0;
    Index round = 0;
    std::string instance_id;
};

/// Features of original row `row` at `point`; `lp` supplies the row dual.
FeatureVector compute_features(const MipInstance& instance, const Point& point, const LpSolution& lp, Index row);

/// Features for every row of the instance.
std::vector<FeatureVector> compute_all_features(const MipInstance& instance, const Point& point, const LpSolution& lp);

} // namespace mirlab
