#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/balance.hpp"
#include "povml/classifier.hpp"

namespace povml {

enum class Averaging { macro, weighted };

enum class ModelKind { tree, forest, gbt, nb, knn };

const char* model_kind_name(ModelKind m);
std::optional<ModelKind> model_kind_from_name(const std::string& s);

// Hyperparameters for all five learners; each kind reads its own subset.
struct ModelConfig {
    ModelKind kind = ModelKind::forest;
    // trees
    std::size_t n_trees = 500;
    int max_depth = -1;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    std::size_t features_per_split = 0;  // 0 = floor(sqrt(p)) for forests, all for trees
    // boosting
    std::size_t iterations = 300;
    double learning_rate = 0.1;
    int gbt_max_depth = 3;
    double subsample = 1.0;
    // naive bayes
    double alpha = 1.0;
    double var_floor = 1e-9;
    // knn
    std::size_t knn_k = 5;
};

struct EvalConfig {
    double test_fraction = 0.2;
    std::size_t cv_folds = 5;
    bool stratified = true;
    Averaging averaging = Averaging::macro;
};

struct PcaConfig {
    bool enabled = false;
    std::size_t k = 60;
};

// One reproducible experiment: dataset, seed, and every stage knob. Flags on
// the CLI override file values; all randomness fans out from the one seed.
struct PipelineConfig {
    std::string dataset;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = machine default
    std::string schema_path;        // optional schema override
    std::string wrangle_plan_path;  // optional plan override
    std::set<std::string> scale_minmax_columns = {"dependency"};
    PcaConfig pca;
    BalanceConfig balance;
    ModelConfig model;
    EvalConfig eval;

    static PipelineConfig from_json(const nlohmann::json& j);
    static PipelineConfig load(const std::string& path);
    nlohmann::json to_json() const;

    // FNV-1a hash of the canonical JSON form, for audit logs.
    std::string hash() const;
};

// Instantiate the configured learner. categorical_features marks the dummy
// columns for the mixed-data Bayes model.
std::unique_ptr<Classifier> make_classifier(const ModelConfig& config, std::uint64_t seed,
                                            std::vector<std::size_t> categorical_features);

}  // namespace povml
