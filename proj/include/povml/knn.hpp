#pragma once

#include <vector>

#include "povml/classifier.hpp"

namespace povml {

struct KnnParams {
    std::size_t k = 5;
};

// Lazy learner: stores the training rows and takes a (weighted) majority
// vote over the k nearest neighbors by Euclidean distance. Distance ties
// break by training-row index, vote ties by the lowest class value.
class KnnClassifier : public Classifier {
public:
    explicit KnnClassifier(KnnParams params = {}) : params_(params) {}

    void fit(const Matrix& x, const std::vector<int>& labels,
             std::span<const double> weights = {}) override;
    Matrix predict_proba(const Matrix& x) const override;
    const std::vector<int>& classes() const override { return encoding_.classes; }
    std::string model_type() const override { return "knn"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<KnnClassifier> from_json(const nlohmann::json& j);

private:
    KnnParams params_;
    LabelEncoding encoding_;
    Matrix train_;
    std::vector<std::size_t> y_;
    std::vector<double> w_;
};

}  // namespace povml
