#pragma once

#include <cstdint>
#include <vector>

#include "povml/tree.hpp"

namespace povml {

struct ForestParams {
    std::size_t n_trees = 500;
    TreeParams tree;                // tree.features_per_split 0 = floor(sqrt(p))
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// Bagged CART trees with per-split random feature subsets. Each tree trains
// on a bootstrap resample drawn from a stream derived from the master seed,
// so trees are independent of scheduling. predict_proba averages the leaf
// distributions.
class RandomForestClassifier : public Classifier {
public:
    explicit RandomForestClassifier(ForestParams params = {}) : params_(params) {}

    void fit(const Matrix& x, const std::vector<int>& labels,
             std::span<const double> weights = {}) override;
    Matrix predict_proba(const Matrix& x) const override;
    const std::vector<int>& classes() const override { return encoding_.classes; }
    std::optional<std::vector<double>> importance_gains() const override;
    std::string model_type() const override { return "forest"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<RandomForestClassifier> from_json(const nlohmann::json& j);

    const std::vector<Tree>& trees() const { return trees_; }
    const ForestParams& params() const { return params_; }

private:
    ForestParams params_;
    LabelEncoding encoding_;
    std::vector<Tree> trees_;
    std::size_t n_features_ = 0;
};

}  // namespace povml
