#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/classifier.hpp"
#include "povml/matrix.hpp"

namespace povml {

// Gini impurity 1 - sum p_c^2 over (possibly weighted) class counts.
// Throws on all-zero counts.
double gini(std::span<const double> class_weights);

struct TreeParams {
    int max_depth = -1;                  // -1: unlimited
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    std::size_t features_per_split = 0;  // 0: all features
    std::uint64_t seed = 0;
};

struct SplitCandidate {
    std::size_t feature = 0;
    double threshold = 0;
    double decrease = 0;  // parent impurity minus weighted child impurity
};

// Exhaustive scan over midpoints between consecutive distinct values of each
// candidate feature; best weighted Gini decrease wins, ties broken by (lower
// feature index, lower threshold). nullopt when no split decreases impurity.
std::optional<SplitCandidate> best_split(const Matrix& x, const std::vector<int>& labels,
                                         std::span<const double> weights,
                                         const std::vector<std::size_t>& candidate_features,
                                         std::size_t min_samples_leaf = 1);

// Flat CART tree. Internal nodes route x[feature] <= threshold to left;
// leaves hold a normalized class distribution.
struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0;
    int left = -1;
    int right = -1;
    double gain = 0;            // absolute impurity decrease, for importances
    std::vector<double> dist;   // leaf distribution over encoded classes

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    const std::vector<double>& leaf_dist(const double* row) const;
    void accumulate_gains(std::vector<double>& gains) const;

    nlohmann::json to_json() const;
    static Tree from_json(const nlohmann::json& j);
};

// Recursive CART construction. mult carries structural row multiplicities
// (bootstrap counts); weights are the impurity/leaf weights.
Tree fit_tree_impl(const Matrix& x, const std::vector<std::size_t>& y_enc, std::size_t n_classes,
                   std::span<const double> weights, std::span<const std::size_t> mult,
                   const std::vector<std::size_t>& rows, const TreeParams& params);

class DecisionTreeClassifier : public Classifier {
public:
    explicit DecisionTreeClassifier(TreeParams params = {}) : params_(params) {}

    void fit(const Matrix& x, const std::vector<int>& labels,
             std::span<const double> weights = {}) override;
    Matrix predict_proba(const Matrix& x) const override;
    const std::vector<int>& classes() const override { return encoding_.classes; }
    std::optional<std::vector<double>> importance_gains() const override;
    std::string model_type() const override { return "tree"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<DecisionTreeClassifier> from_json(const nlohmann::json& j);

    const Tree& tree() const { return tree_; }
    const TreeParams& params() const { return params_; }

private:
    TreeParams params_;
    LabelEncoding encoding_;
    Tree tree_;
    std::size_t n_features_ = 0;
};

}  // namespace povml
