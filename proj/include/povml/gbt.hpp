#pragma once

#include <cstdint>
#include <vector>

#include "povml/classifier.hpp"
#include "povml/matrix.hpp"

namespace povml {

struct GbtParams {
    std::size_t iterations = 300;
    double learning_rate = 0.1;
    int max_depth = 3;
    std::size_t min_samples_leaf = 1;
    double subsample = 1.0;  // row fraction per iteration, without replacement
    std::uint64_t seed = 0;
};

// Regression tree used as a boosting stage: squared-error splits on the
// class residuals, one-step Newton leaf values.
struct RegNode {
    int feature = -1;  // -1: leaf
    double threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0;  // leaf output
    double gain = 0;

    bool is_leaf() const { return feature < 0; }
};

struct RegTree {
    std::vector<RegNode> nodes;

    double predict_row(const double* row) const;
    void accumulate_gains(std::vector<double>& gains) const;

    nlohmann::json to_json() const;
    static RegTree from_json(const nlohmann::json& j);
};

// Multiclass functional gradient descent on softmax cross-entropy: per-class
// scores start at the log priors; every iteration fits one regression tree
// per class to the residual y_onehot - softmax(scores) and adds
// learning_rate * tree(x) to that class's score.
class GradientBoostedTreesClassifier : public Classifier {
public:
    explicit GradientBoostedTreesClassifier(GbtParams params = {}) : params_(params) {}

    void fit(const Matrix& x, const std::vector<int>& labels,
             std::span<const double> weights = {}) override;
    Matrix predict_proba(const Matrix& x) const override;
    const std::vector<int>& classes() const override { return encoding_.classes; }
    std::optional<std::vector<double>> importance_gains() const override;
    std::string model_type() const override { return "gbt"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<GradientBoostedTreesClassifier> from_json(const nlohmann::json& j);

    // Weighted training log-loss after each completed iteration.
    const std::vector<double>& training_loss() const { return training_loss_; }
    const std::vector<std::vector<RegTree>>& stages() const { return stages_; }
    const GbtParams& params() const { return params_; }

private:
    GbtParams params_;
    LabelEncoding encoding_;
    std::vector<double> init_scores_;           // log priors, one per class
    std::vector<std::vector<RegTree>> stages_;  // [iteration][class]
    std::vector<double> training_loss_;
    std::size_t n_features_ = 0;

    Matrix score_matrix(const Matrix& x) const;
};

}  // namespace povml
