#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/matrix.hpp"

namespace povml {

enum class BalanceMethod { none, undersample, oversample, smote, class_weights };

const char* balance_method_name(BalanceMethod m);
std::optional<BalanceMethod> balance_method_from_name(const std::string& s);

struct BalanceConfig {
    BalanceMethod method = BalanceMethod::none;
    std::size_t smote_k = 5;
    std::optional<std::uint64_t> seed;  // unset: derived from the pipeline seed
};

// Every class downsized to the minority count by uniform deletion without
// replacement. Requires >= 2 classes.
FeatureMatrix undersample(const FeatureMatrix& m, std::uint64_t seed);

// Every class raised to the majority count by duplicating rows sampled with
// replacement. Requires >= 2 classes.
FeatureMatrix oversample(const FeatureMatrix& m, std::uint64_t seed);

// Each non-majority class raised to the majority count with synthetic rows
// x + lambda * (nn - x), nn one of the k nearest same-class neighbors.
// Classes with a single member fall back to duplication (reported).
struct SmoteResult {
    FeatureMatrix matrix;
    std::vector<std::string> notes;  // fallback reports
};
SmoteResult smote(const FeatureMatrix& m, std::size_t k, std::uint64_t seed);

// Balanced heuristic w_c = N / (K * n_c); preserves total weight.
std::map<int, double> class_weights(const std::vector<int>& labels);

}  // namespace povml
