#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/matrix.hpp"

namespace povml {

enum class ScaleKind { minmax, zscore };

// Fitted rescaling parameters for the numeric feature columns: bounded rates
// get min-max normalization, everything else a z-score with the population
// standard deviation. Dummy columns pass through untouched.
struct ScalerState {
    struct ColumnScale {
        std::string name;
        ScaleKind kind = ScaleKind::zscore;
        double a = 0;  // min or mean
        double b = 0;  // max or sigma
    };
    std::vector<std::string> feature_names;  // of the fitting matrix
    std::vector<ColumnScale> columns;        // one per numeric feature, in matrix order

    static ScalerState from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

ScalerState fit_scaler(const FeatureMatrix& m, const std::set<std::string>& minmax_columns);

// (x - min)/(max - min) for min-max columns, (x - mean)/sigma for z-score
// columns. Degenerate columns (max == min or sigma == 0) map to 0.
FeatureMatrix transform(const FeatureMatrix& m, const ScalerState& state);

}  // namespace povml
