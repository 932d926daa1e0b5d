#include "mirlab/gbt.hpp"

#include "mirlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mirlab {

namespace {

constexpr double kProbabilityClip = 1e-15;

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double log_odds(double p) {
    p = std::clamp(p, kProbabilityClip, 1.0 - kProbabilityClip);
    return std::log(p / (1.0 - p));
}

// mean of log(1 + exp(F)) - y F
double logistic_loss(const Vector& raw, const std::vector<int>& labels) {
    double total = 0.0;
    for (Index i = 0; i < raw.size(); ++i) {
        const double z = raw(i);
        const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        total += softplus - labels[static_cast<std::size_t>(i)] * z;
    }
    return total / static_cast<double>(raw.size());
}

struct Grower {
    const Matrix& X;
    const std::vector<std::vector<Index>>& order;
    int max_depth;

    // Returns the tree and, through `leaf_of`, the leaf reached by each sample.
    RegressionTree grow(const Vector& residual, const Vector& hessian, std::vector<int>& leaf_of) const {
        const Index N = X.rows();
        const Index F = X.cols();
        RegressionTree tree;
        tree.nodes.push_back(TreeNode{});
        leaf_of.assign(static_cast<std::size_t>(N), 0);

        std::vector<int> active{0};
        for (int depth = 0; depth < max_depth && !active.empty(); ++depth) {
            const std::size_t count = tree.nodes.size();
            std::vector<char> is_active(count, 0);
            std::vector<double> node_sum(count, 0.0);
            std::vector<Index> node_n(count, 0);
            for (int k : active) is_active[static_cast<std::size_t>(k)] = 1;
            for (Index i = 0; i < N; ++i) {
                const auto k = static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(i)]);
                node_sum[k] += residual(i);
                ++node_n[k];
            }

            std::vector<double> best_gain(count, 0.0);
            std::vector<int> best_feature(count, -1);
            std::vector<double> best_threshold(count, 0.0);
            std::vector<Index> left_n(count);
            std::vector<double> left_sum(count);
            std::vector<double> last(count);
            for (Index f = 0; f < F; ++f) {
                std::fill(left_n.begin(), left_n.end(), 0);
                std::fill(left_sum.begin(), left_sum.end(), 0.0);
                for (Index i : order[static_cast<std::size_t>(f)]) {
                    const auto k = static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(i)]);
                    if (!is_active[k]) continue;
                    const double value = X(i, f);
                    if (left_n[k] > 0 && value > last[k]) {
                        const double nl = static_cast<double>(left_n[k]);
                        const double nr = static_cast<double>(node_n[k] - left_n[k]);
                        const double sl = left_sum[k];
                        const double sr = node_sum[k] - sl;
                        const double gain = sl * sl / nl + sr * sr / nr - node_sum[k] * node_sum[k] / static_cast<double>(node_n[k]);
                        if (gain > best_gain[k] && gain > 1e-12 * static_cast<double>(node_n[k])) {
                            double threshold = last[k] + 0.5 * (value - last[k]);
                            if (threshold <= last[k]) threshold = value;
                            best_gain[k] = gain;
                            best_feature[k] = static_cast<int>(f);
                            best_threshold[k] = threshold;
                        }
                    }
                    ++left_n[k];
                    left_sum[k] += residual(i);
                    last[k] = value;
                }
            }

            std::vector<int> next;
            for (int k : active) {
                const auto uk = static_cast<std::size_t>(k);
                if (best_feature[uk] < 0) continue;
                const int left = static_cast<int>(tree.nodes.size());
                tree.nodes.push_back(TreeNode{});
                tree.nodes.push_back(TreeNode{});
                auto& node = tree.nodes[uk];
                node.feature = best_feature[uk];
                node.threshold = best_threshold[uk];
                node.left = left;
                node.right = left + 1;
                next.push_back(left);
                next.push_back(left + 1);
            }
            for (Index i = 0; i < N; ++i) {
                auto& at = leaf_of[static_cast<std::size_t>(i)];
                const auto& node = tree.nodes[static_cast<std::size_t>(at)];
                if (node.feature < 0) continue;
                at = X(i, node.feature) < node.threshold ? node.left : node.right;
            }
            active = std::move(next);
        }

        std::vector<double> sum_r(tree.nodes.size(), 0.0);
        std::vector<double> sum_h(tree.nodes.size(), 0.0);
        for (Index i = 0; i < N; ++i) {
            const auto k = static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(i)]);
            sum_r[k] += residual(i);
            sum_h[k] += hessian(i);
        }
        for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
            auto& node = tree.nodes[k];
            if (node.feature >= 0) continue;
            node.value = std::abs(sum_h[k]) < 1e-150 ? 0.0 : sum_r[k] / sum_h[k];
        }
        return tree;
    }
};

} // namespace

double RegressionTree::predict(const double* x) const {
    std::size_t k = 0;
    while (nodes[k].feature >= 0) {
        const auto& node = nodes[k];
        k = static_cast<std::size_t>(x[node.feature] < node.threshold ? node.left : node.right);
    }
    return nodes[k].value;
}

int RegressionTree::depth() const {
    std::vector<int> level(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        deepest = std::max(deepest, level[k]);
        if (nodes[k].feature < 0) continue;
        level[static_cast<std::size_t>(nodes[k].left)] = level[k] + 1;
        level[static_cast<std::size_t>(nodes[k].right)] = level[k] + 1;
    }
    return deepest;
}

double GbtModel::raw_score(const double* x) const {
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.predict(x);
    return init + params.learning_rate * sum;
}

double GbtModel::probability(const double* x) const { return sigmoid(raw_score(x)); }

GbtModel GbtModel::constant(double probability, Index n_features) {
    GbtModel model;
    model.n_features = n_features;
    model.init = log_odds(probability);
    return model;
}

std::string GbtModel::to_json() const {
    nlohmann::json doc;
    doc["format"] = "mirlab.gbt.v1";
    doc["schema"] = schema;
    doc["n_features"] = n_features;
    doc["params"] = {{"n_trees", params.n_trees}, {"learning_rate", params.learning_rate}, {"max_depth", params.max_depth}};
    doc["init"] = init;
    auto& list = doc["trees"] = nlohmann::json::array();
    for (const auto& tree : trees) {
        nlohmann::json t;
        std::vector<int> feature, left, right;
        std::vector<double> threshold, value;
        for (const auto& node : tree.nodes) {
            feature.push_back(node.feature);
            threshold.push_back(node.threshold);
            left.push_back(node.left);
            right.push_back(node.right);
            value.push_back(node.value);
        }
        t["feature"] = feature;
        t["threshold"] = threshold;
        t["left"] = left;
        t["right"] = right;
        t["value"] = value;
        list.push_back(std::move(t));
    }
    return doc.dump(1);
}

GbtModel GbtModel::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("model file is not valid JSON: ") + e.what());
    }
    if (doc.value("format", "") != "mirlab.gbt.v1") throw SchemaMismatch("unknown model format");
    GbtModel model;
    try {
        model.schema = doc.at("schema").get<std::string>();
        model.n_features = doc.at("n_features").get<Index>();
        const auto& params = doc.at("params");
        model.params.n_trees = params.at("n_trees").get<int>();
        model.params.learning_rate = params.at("learning_rate").get<double>();
        model.params.max_depth = params.at("max_depth").get<int>();
        model.init = doc.at("init").get<double>();
        for (const auto& t : doc.at("trees")) {
            const auto feature = t.at("feature").get<std::vector<int>>();
            const auto threshold = t.at("threshold").get<std::vector<double>>();
            const auto left = t.at("left").get<std::vector<int>>();
            const auto right = t.at("right").get<std::vector<int>>();
            const auto value = t.at("value").get<std::vector<double>>();
            const std::size_t size = feature.size();
            if (size == 0 || threshold.size() != size || left.size() != size || right.size() != size || value.size() != size)
                throw SchemaMismatch("tree node arrays have inconsistent lengths");
            RegressionTree tree;
            for (std::size_t k = 0; k < size; ++k) {
                if (feature[k] >= model.n_features ||
                    (feature[k] >= 0 && (left[k] <= static_cast<int>(k) || right[k] <= static_cast<int>(k) ||
                                         left[k] >= static_cast<int>(size) || right[k] >= static_cast<int>(size))))
                    throw SchemaMismatch("tree node " + std::to_string(k) + " is malformed");
                tree.nodes.push_back(TreeNode{feature[k], threshold[k], left[k], right[k], value[k]});
            }
            model.trees.push_back(std::move(tree));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("model file is missing fields: ") + e.what());
    }
    return model;
}

TrainResult train_gbt(const Matrix& X, const std::vector<int>& labels, const GbtParams& params, std::string schema) {
    const Index N = X.rows();
    if (N == 0) throw ConfigError("training set is empty");
    if (static_cast<Index>(labels.size()) != N) throw ShapeError("label count does not match sample count");
    if (params.n_trees < 0 || !(params.learning_rate > 0.0) || params.max_depth < 1)
        throw ConfigError("invalid boosting hyperparameters");
    Index positives = 0;
    for (int y : labels) {
        if (y != 0 && y != 1) throw ConfigError("labels must be 0 or 1");
        positives += y;
    }

    TrainResult result;
    result.model.schema = std::move(schema);
    result.model.params = params;
    result.model.n_features = X.cols();
    result.model.init = log_odds(static_cast<double>(positives) / static_cast<double>(N));
    Vector raw = Vector::Constant(N, result.model.init);
    result.loss_history.push_back(logistic_loss(raw, labels));
    if (positives == 0 || positives == N) {
        result.single_class = true;
        return result;
    }

    std::vector<std::vector<Index>> order(static_cast<std::size_t>(X.cols()));
    for (Index f = 0; f < X.cols(); ++f) {
        auto& idx = order[static_cast<std::size_t>(f)];
        idx.resize(static_cast<std::size_t>(N));
        std::iota(idx.begin(), idx.end(), Index{0});
        std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return X(a, f) < X(b, f); });
    }

    Grower grower{X, order, params.max_depth};
    Vector residual(N);
    Vector hessian(N);
    std::vector<int> leaf_of;
    for (int t = 0; t < params.n_trees; ++t) {
        for (Index i = 0; i < N; ++i) {
            const double p = sigmoid(raw(i));
            residual(i) = labels[static_cast<std::size_t>(i)] - p;
            hessian(i) = p * (1.0 - p);
        }
        RegressionTree tree = grower.grow(residual, hessian, leaf_of);
        for (Index i = 0; i < N; ++i)
            raw(i) += params.learning_rate * tree.nodes[static_cast<std::size_t>(leaf_of[static_cast<std::size_t>(i)])].value;
        result.model.trees.push_back(std::move(tree));
        result.loss_history.push_back(logistic_loss(raw, labels));
    }
    return result;
}

TrainResult train_gbt(std::span<const LabeledSample> dataset, const GbtParams& params) {
    Matrix X(static_cast<Index>(dataset.size()), kFeatureCount);
    std::vector<int> labels;
    labels.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        X.row(static_cast<Index>(i)) = dataset[i].features.values.transpose();
        labels.push_back(dataset[i].label);
    }
    return train_gbt(X, labels, params);
}

std::vector<int> label_round(std::span<const Vector> lambdas, Index rows, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("label threshold must be positive");
    std::vector<int> labels(static_cast<std::size_t>(rows), 0);
    for (const auto& lambda : lambdas) {
        if (lambda.size() != rows) throw ShapeError("aggregation vector does not match row count");
        for (Index j = 0; j < rows; ++j)
            if (std::abs(lambda(j)) > epsilon) labels[static_cast<std::size_t>(j)] = 1;
    }
    return labels;
}

std::vector<int> label_round(std::span<const SeparationSolution> pool, Index rows, double epsilon) {
    std::vector<Vector> lambdas;
    lambdas.reserve(pool.size());
    for (const auto& sol : pool) lambdas.push_back(sol.lambda);
    return label_round(std::span<const Vector>(lambdas), rows, epsilon);
}

std::vector<Index> predict_useful(const GbtModel& model, std::span<const FeatureVector> features, double threshold) {
    if (model.schema != kFeatureSchema || model.n_features != kFeatureCount)
        throw SchemaMismatch("model schema '" + model.schema + "' does not match " + std::string(kFeatureSchema));
    std::vector<Index> rows;
    for (const auto& fv : features)
        if (model.probability(fv.values.data()) >= threshold) rows.push_back(fv.row);
    return rows;
}

EvalReport confusion_report(const std::vector<int>& truth, const std::vector<int>& predicted) {
    if (truth.size() != predicted.size()) throw ShapeError("prediction count does not match label count");
    EvalReport report;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (predicted[i] && truth[i]) ++report.tp;
        else if (predicted[i]) ++report.fp;
        else if (truth[i]) ++report.fn;
        else ++report.tn;
    }
    if (report.total() > 0)
        report.accuracy = static_cast<double>(report.tp + report.tn) / static_cast<double>(report.total());
    if (report.tp + report.fp > 0)
        report.precision = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fp);
    if (report.tp + report.fn > 0)
        report.recall = static_cast<double>(report.tp) / static_cast<double>(report.tp + report.fn);
    return report;
}

EvalReport evaluate(const GbtModel& model, std::span<const LabeledSample> dataset, double threshold) {
    std::vector<int> truth, predicted;
    for (const auto& sample : dataset) {
        truth.push_back(sample.label);
        predicted.push_back(model.probability(sample.features.values.data()) >= threshold ? 1 : 0);
    }
    return confusion_report(truth, predicted);
}

} // namespace mirlab
