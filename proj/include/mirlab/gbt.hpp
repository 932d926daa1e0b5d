#pragma once

// Gradient-boosted regression trees for binary classification.
//
// Logistic loss. Each round fits a least-squares regression tree to the
// residuals y - p (exact greedy split search over midpoints of distinct
// values), then sets every leaf to a single Newton step
// sum(residual) / sum(p (1 - p)). Prediction is sigmoid(init + lr * sum of
// leaves).

#include "mirlab/features.hpp"
#include "mirlab/mir_sep.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mirlab {

struct LabeledSample {
    FeatureVector features;
    int label = 0;
};

struct GbtParams {
    int n_trees = 100;
    double learning_rate = 0.1;
    int max_depth = 5;
};

struct TreeNode {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // x[feature] < threshold goes left
    int left = -1;
    int right = -1;
    double value = 0.0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const double* x) const;
    int depth() const;
};

struct GbtModel {
    std::string schema{kFeatureSchema};
    GbtParams params;
    Index n_features = kFeatureCount;
    double init = 0.0;
    std::vector<RegressionTree> trees;

    double raw_score(const double* x) const;
    double probability(const double* x) const;

    /// Model with no trees predicting `probability` everywhere.
    static GbtModel constant(double probability, Index n_features = kFeatureCount);

    std::string to_json() const;
    static GbtModel from_json(const std::string& text);
};

struct TrainResult {
    GbtModel model;
    bool single_class = false;           // labels were constant; model is constant
    std::vector<double> loss_history;    // mean logistic loss before each round and at the end
};

/// `X` holds one sample per row.
TrainResult train_gbt(const Matrix& X, const std::vector<int>& labels, const GbtParams& params = {},
                      std::string schema = std::string(kFeatureSchema));

TrainResult train_gbt(std::span<const LabeledSample> dataset, const GbtParams& params = {});

/// Entry j is 1 iff some solution has |lambda_j| > epsilon.
std::vector<int> label_round(std::span<const Vector> lambdas, Index rows, double epsilon = 1e-6);
std::vector<int> label_round(std::span<const SeparationSolution> pool, Index rows, double epsilon = 1e-6);

/// Rows whose predicted probability is at least `threshold`. Throws
/// SchemaMismatch when the model was trained on a different feature schema.
std::vector<Index> predict_useful(const GbtModel& model, std::span<const FeatureVector> features,
                                  double threshold = 0.5);

struct EvalReport {
    double accuracy = 0.0;
    std::optional<double> precision;  // empty when nothing was predicted positive
    std::optional<double> recall;     // empty when nothing is labeled positive
    Index tp = 0;
    Index fp = 0;
    Index fn = 0;
    Index tn = 0;

    Index total() const { return tp + fp + fn + tn; }
};

EvalReport confusion_report(const std::vector<int>& truth, const std::vector<int>& predicted);
EvalReport evaluate(const GbtModel& model, std::span<const LabeledSample> dataset, double threshold = 0.5);

} // namespace mirlab
