#include "povml/stages.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "povml/errors.hpp"

namespace povml {

std::vector<std::string> nan_columns(const FeatureMatrix& m) {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < m.n_features(); ++c) {
        bool has_nan = false;
        for (std::size_t r = 0; r < m.n_rows() && !has_nan; ++r)
            has_nan = std::isnan(m.values(r, c));
        if (has_nan) out.push_back(m.feature_names[c]);
    }
    return out;
}

std::pair<FittedStages, FeatureMatrix> fit_transform_stages(
    const PipelineConfig& config, const FeatureMatrix& train_structural,
    const std::vector<std::string>& impute_columns) {
    FittedStages stages;
    FeatureMatrix train = train_structural;

    stages.imputer = fit_imputer(train, impute_columns);
    impute(train, stages.imputer);

    stages.scaler = fit_scaler(train, config.scale_minmax_columns);
    train = transform(train, stages.scaler);

    if (config.pca.enabled) {
        stages.pca = fit_pca(train, config.pca.k);
        train = project(train, *stages.pca);
    }
    return {std::move(stages), std::move(train)};
}

FeatureMatrix transform_stages(const FittedStages& stages, FeatureMatrix m) {
    impute(m, stages.imputer);
    m = transform(m, stages.scaler);
    if (stages.pca) m = project(m, *stages.pca);
    return m;
}

namespace {
std::string count_line(const char* tag, const std::vector<int>& labels) {
    std::map<int, std::size_t> counts;
    for (int l : labels) counts[l]++;
    std::ostringstream out;
    out << tag << " class counts:";
    for (const auto& [cls, n] : counts) out << " " << cls << "=" << n;
    return out.str();
}
}  // namespace

BalancedTrain apply_balance(const BalanceConfig& config, FeatureMatrix train,
                            std::uint64_t stage_seed) {
    BalancedTrain out;
    const std::uint64_t seed = config.seed.value_or(stage_seed);
    switch (config.method) {
        case BalanceMethod::none:
            out.matrix = std::move(train);
            return out;
        case BalanceMethod::class_weights: {
            const auto weights = class_weights(train.labels);
            out.weights.reserve(train.labels.size());
            for (int l : train.labels) out.weights.push_back(weights.at(l));
            std::ostringstream note;
            note << "class weights:";
            for (const auto& [cls, w] : weights) note << " " << cls << "=" << w;
            out.notes.push_back(note.str());
            out.matrix = std::move(train);
            return out;
        }
        case BalanceMethod::undersample:
            out.notes.push_back(count_line("before undersample", train.labels));
            out.matrix = undersample(train, seed);
            out.notes.push_back(count_line("after undersample", out.matrix.labels));
            return out;
        case BalanceMethod::oversample:
            out.notes.push_back(count_line("before oversample", train.labels));
            out.matrix = oversample(train, seed);
            out.notes.push_back(count_line("after oversample", out.matrix.labels));
            return out;
        case BalanceMethod::smote: {
            out.notes.push_back(count_line("before smote", train.labels));
            SmoteResult res = smote(train, config.smote_k, seed);
            out.matrix = std::move(res.matrix);
            for (auto& n : res.notes) out.notes.push_back(std::move(n));
            out.notes.push_back(count_line("after smote", out.matrix.labels));
            return out;
        }
    }
    throw StageError("balance", "unknown balance method");
}

}  // namespace povml
