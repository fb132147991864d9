#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/classifier.hpp"
#include "povml/config.hpp"
#include "povml/matrix.hpp"

namespace povml {

struct SplitIndices {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
};

// Held-out split with round-half-up test count; stratified keeps per-class
// test counts within 1 of test_fraction * support (largest remainder).
SplitIndices split_80_20(const std::vector<int>& labels, std::uint64_t seed, bool stratified,
                         double test_fraction = 0.2);

// k disjoint folds covering all rows, per-class counts within 1 of support/k.
// Every class needs at least k members.
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels,
                                                       std::size_t k, std::uint64_t seed);

class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<int> classes);

    void add(int truth, int predicted);
    std::size_t at(std::size_t true_idx, std::size_t pred_idx) const {
        return counts_[true_idx * classes_.size() + pred_idx];
    }
    const std::vector<int>& classes() const { return classes_; }
    std::size_t total() const { return total_; }
    std::size_t support(std::size_t class_idx) const;
    std::size_t predicted(std::size_t class_idx) const;

private:
    std::vector<int> classes_;
    std::vector<std::size_t> counts_;
    std::size_t total_ = 0;
};

struct ClassMetrics {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    std::size_t support = 0;
};

struct MetricsReport {
    double accuracy = 0;
    std::map<int, ClassMetrics> per_class;
    double avg_precision = 0;
    double avg_recall = 0;
    double avg_f1 = 0;
    Averaging averaging = Averaging::macro;
    std::vector<std::string> flags;
};

// accuracy = trace/total; per-class precision/recall/F1; the averaged metrics
// are unweighted (macro) or support-weighted class means. Zero predicted
// positives give precision 0 (flagged); zero-support classes are excluded
// from the average (flagged).
MetricsReport metrics(const ConfusionMatrix& confusion, Averaging averaging = Averaging::macro);

struct FoldScore {
    double accuracy = 0;
    double avg_precision = 0;
    double avg_recall = 0;
    double avg_f1 = 0;
};

struct CvResult {
    std::vector<FoldScore> folds;
    FoldScore mean;
};

// Leakage-free k-fold: imputer, scaler, PCA and balancing are fitted on the
// k-1 training folds only. structural must still carry its NaN markers (run
// wrangle_structural, not apply_plan).
CvResult cross_validate(const PipelineConfig& config, const FeatureMatrix& structural,
                        std::size_t k, std::uint64_t seed);

// Total split gain per feature, normalized to sum 1. Empty for a model with
// no splits (flagged by callers).
std::map<std::string, double> feature_importance(const Classifier& model,
                                                 const std::vector<std::string>& feature_names);

// rank,feature,fraction rows, descending.
std::string importance_csv(const std::map<std::string, double>& importances);

nlohmann::json metrics_to_json(const MetricsReport& report, const ConfusionMatrix& confusion);
nlohmann::json cv_to_json(const CvResult& cv);

// One row per model x metric.
std::string report_csv(const std::string& model_name, const MetricsReport& report,
                       const CvResult* cv);

}  // namespace povml
