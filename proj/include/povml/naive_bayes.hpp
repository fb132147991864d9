#pragma once

#include <map>
#include <vector>

#include "povml/classifier.hpp"

namespace povml {

struct NaiveBayesParams {
    double alpha = 1.0;        // Laplace smoothing
    double var_floor = 1e-9;   // minimum Gaussian variance
};

// Mixed-data Bayes classifier: declared categorical features use
// Laplace-smoothed frequency tables, everything else a per-class Gaussian.
// Posteriors are evaluated in log space and renormalized.
class NaiveBayesClassifier : public Classifier {
public:
    NaiveBayesClassifier(NaiveBayesParams params = {},
                         std::vector<std::size_t> categorical_features = {})
        : params_(params), categorical_features_(std::move(categorical_features)) {}

    void fit(const Matrix& x, const std::vector<int>& labels,
             std::span<const double> weights = {}) override;
    Matrix predict_proba(const Matrix& x) const override;
    const std::vector<int>& classes() const override { return encoding_.classes; }
    std::string model_type() const override { return "nb"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<NaiveBayesClassifier> from_json(const nlohmann::json& j);

    const std::vector<double>& priors() const { return priors_; }

private:
    struct CategoricalFeature {
        std::size_t feature = 0;
        // value -> weighted count per class; distinct value count is the
        // smoothing vocabulary
        std::map<double, std::vector<double>> counts;
    };
    struct GaussianFeature {
        std::size_t feature = 0;
        std::vector<double> mean;      // per class
        std::vector<double> variance;  // per class, floored
    };

    NaiveBayesParams params_;
    std::vector<std::size_t> categorical_features_;
    LabelEncoding encoding_;
    std::vector<double> priors_;
    std::vector<double> class_weight_totals_;
    std::vector<CategoricalFeature> categorical_;
    std::vector<GaussianFeature> gaussian_;
    std::size_t n_features_ = 0;
};

}  // namespace povml
