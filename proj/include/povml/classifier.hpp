#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/matrix.hpp"

namespace povml {

// Uniform contract for all five learners. predict_proba rows sum to 1;
// predict is the argmax with ties broken by the lowest class value. Models
// are immutable after fit and safe for concurrent prediction.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual void fit(const Matrix& x, const std::vector<int>& labels,
                     std::span<const double> weights = {}) = 0;
    virtual Matrix predict_proba(const Matrix& x) const = 0;
    virtual std::vector<int> predict(const Matrix& x) const;

    // Distinct class values, ascending. Columns of predict_proba follow this.
    virtual const std::vector<int>& classes() const = 0;

    // Per-feature split gains for tree-based models, in input-feature order.
    virtual std::optional<std::vector<double>> importance_gains() const { return std::nullopt; }

    virtual std::string model_type() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

// Reload any serialized model (dispatches on its model_type field).
std::unique_ptr<Classifier> load_classifier(const nlohmann::json& j);

// Fit-time label bookkeeping shared by the learners.
struct LabelEncoding {
    std::vector<int> classes;  // ascending

    static LabelEncoding from(const std::vector<int>& labels);
    std::vector<std::size_t> encode(const std::vector<int>& labels) const;
    std::size_t k() const { return classes.size(); }
};

// Sample weights normalized to sum to n (all-ones when absent), so weight
// rescaling cannot move any learner's decisions.
std::vector<double> normalize_weights(std::span<const double> weights, std::size_t n);

inline constexpr int kModelFormatVersion = 1;

}  // namespace povml
