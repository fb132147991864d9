#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/matrix.hpp"

namespace povml {

// Principal components of a feature matrix: top-k orthonormal directions of
// the (n-1)-normalized covariance, eigenvalues descending. Sign convention:
// each component's largest-magnitude entry is positive, so fits are
// deterministic.
struct PcaModel {
    std::vector<std::string> input_feature_names;
    std::vector<double> column_means;            // p
    Matrix components;                           // k x p, orthonormal rows
    std::vector<double> explained_variance;      // k eigenvalues, non-increasing
    std::vector<double> explained_variance_ratio;  // k fractions of total variance
    double total_variance = 0;                   // sum over all p eigenvalues

    std::size_t k() const { return components.rows; }

    static PcaModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Requires 2 <= rows and 1 <= k <= features.
PcaModel fit_pca(const FeatureMatrix& m, std::size_t k);

// Projects onto the fitted directions; output columns are pc1..pck and all
// count as numeric features.
FeatureMatrix project(const FeatureMatrix& m, const PcaModel& model);

// Plot-ready explained-variance table: component index, ratio, cumulative.
std::string explained_variance_csv(const PcaModel& model);

}  // namespace povml
