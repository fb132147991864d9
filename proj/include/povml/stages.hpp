#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "povml/config.hpp"
#include "povml/matrix.hpp"
#include "povml/pca.hpp"
#include "povml/scale.hpp"
#include "povml/wrangle.hpp"

namespace povml {

// Feature columns that still contain NaN markers (the imputable ones).
std::vector<std::string> nan_columns(const FeatureMatrix& m);

// Imputer + scaler + optional PCA, fitted on training rows only.
struct FittedStages {
    ImputerState imputer;
    ScalerState scaler;
    std::optional<PcaModel> pca;
};

// Fits the shared transform stages on train and returns the transformed
// training matrix alongside the fitted state.
std::pair<FittedStages, FeatureMatrix> fit_transform_stages(
    const PipelineConfig& config, const FeatureMatrix& train_structural,
    const std::vector<std::string>& impute_columns);

FeatureMatrix transform_stages(const FittedStages& stages, FeatureMatrix m);

// Training-fold balancing. Resampling methods rewrite the matrix;
// class_weights fills per-row weights instead.
struct BalancedTrain {
    FeatureMatrix matrix;
    std::vector<double> weights;      // empty unless class_weights
    std::vector<std::string> notes;   // audit lines (before/after counts)
};

BalancedTrain apply_balance(const BalanceConfig& config, FeatureMatrix train,
                            std::uint64_t stage_seed);

}  // namespace povml
