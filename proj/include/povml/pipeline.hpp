#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "povml/config.hpp"
#include "povml/eval.hpp"
#include "povml/stages.hpp"
#include "povml/table.hpp"
#include "povml/wrangle.hpp"

namespace povml {

// Loaded dataset after the structural wrangle, plus the resolved schema/plan
// and the audit trail so far.
struct PreparedData {
    Schema schema;
    WranglePlan plan;
    StructuredTable structural;
    std::vector<std::string> impute_columns;
    std::vector<std::string> audit;

    PreparedData() : schema(Schema::canonical()) {}
};

PreparedData prepare(const PipelineConfig& config);

struct TrainResult {
    nlohmann::json model_json;
    FittedStages stages;
    std::vector<std::string> feature_names;  // post-pipeline feature space
    std::vector<std::string> audit;
};

// wrangle -> split -> fit stages on the training split -> balance -> fit.
TrainResult run_train(const PipelineConfig& config);

struct EvaluateResult {
    nlohmann::json report_json;
    std::string report_csv;
    std::string importance_csv;          // empty when the model has no importances
    std::string explained_variance_csv;  // empty when PCA is off
    std::vector<std::string> audit;
};

// Full pipeline with held-out evaluation; optionally stratified k-fold CV on
// the training split (the held-out rows never touch any fitted stage).
EvaluateResult run_evaluate(const PipelineConfig& config, bool with_cv);

// Wrangled features + label column, one line per row.
std::string features_csv(const FeatureMatrix& m);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace povml
