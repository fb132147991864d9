#include "povml/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/rng.hpp"

namespace povml {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

std::vector<std::size_t> categorical_indices(const FeatureMatrix& m) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < m.n_features(); ++c)
        if (!m.is_numeric_feature(m.feature_names[c])) out.push_back(c);
    return out;
}

}  // namespace

PreparedData prepare(const PipelineConfig& config) {
    PreparedData data;
    data.audit.push_back("config hash " + config.hash());
    data.audit.push_back("seed " + std::to_string(config.seed));

    if (!config.schema_path.empty())
        data.schema = Schema::from_json(read_json_file(config.schema_path));
    data.plan = config.wrangle_plan_path.empty()
                    ? build_default_plan()
                    : WranglePlan::from_json(read_json_file(config.wrangle_plan_path));

    const RawTable table = load_csv(config.dataset, data.schema);
    data.audit.push_back("loaded " + config.dataset + ": " + std::to_string(table.n_rows()) +
                         " rows, " + std::to_string(table.n_cols()) + " columns");

    data.structural = wrangle_structural(table, data.plan);
    for (const auto& line : data.structural.audit) data.audit.push_back("wrangle: " + line);
    data.impute_columns = nan_columns(data.structural.matrix);
    return data;
}

namespace {

struct FittedPipeline {
    FittedStages stages;
    std::unique_ptr<Classifier> model;
    FeatureMatrix test;  // transformed held-out rows
    std::vector<std::string> feature_names;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::vector<std::string> audit;
};

FittedPipeline fit_pipeline(const PipelineConfig& config, const PreparedData& data) {
    FittedPipeline out;
    const FeatureMatrix& structural = data.structural.matrix;

    const SplitIndices split = split_80_20(structural.labels, config.seed,
                                           config.eval.stratified, config.eval.test_fraction);
    out.train_rows = split.train_rows;
    out.test_rows = split.test_rows;
    out.audit.push_back("split: " + std::to_string(split.train_rows.size()) + " train / " +
                        std::to_string(split.test_rows.size()) + " test (stratified " +
                        (config.eval.stratified ? "yes" : "no") + ")");

    const FeatureMatrix train_structural = take_rows(structural, split.train_rows);
    const FeatureMatrix test_structural = take_rows(structural, split.test_rows);

    auto [stages, train] = fit_transform_stages(config, train_structural, data.impute_columns);
    out.stages = std::move(stages);
    out.test = transform_stages(out.stages, test_structural);
    out.audit.push_back("features after stages: " + std::to_string(train.n_features()) +
                        (config.pca.enabled ? " (pca k=" + std::to_string(config.pca.k) + ")"
                                            : " (pca off)"));

    BalancedTrain balanced = apply_balance(config.balance, std::move(train),
                                           Rng::derive(config.seed, seed_stream::kBalance));
    for (const auto& note : balanced.notes) out.audit.push_back("balance: " + note);

    out.feature_names = balanced.matrix.feature_names;
    out.model = make_classifier(config.model, Rng::derive(config.seed, seed_stream::kModel),
                                categorical_indices(balanced.matrix));
    out.model->fit(balanced.matrix.values, balanced.matrix.labels, balanced.weights);
    out.audit.push_back("model: " + out.model->model_type() + " fitted on " +
                        std::to_string(balanced.matrix.n_rows()) + " rows");
    return out;
}

}  // namespace

TrainResult run_train(const PipelineConfig& config) {
    const PreparedData data = prepare(config);
    FittedPipeline fitted = fit_pipeline(config, data);

    TrainResult result;
    result.model_json = fitted.model->to_json();
    result.model_json["pipeline_id"] = config.hash();
    result.stages = std::move(fitted.stages);
    result.feature_names = std::move(fitted.feature_names);
    result.audit = data.audit;
    for (const auto& line : fitted.audit) result.audit.push_back(line);
    return result;
}

EvaluateResult run_evaluate(const PipelineConfig& config, bool with_cv) {
    const PreparedData data = prepare(config);
    FittedPipeline fitted = fit_pipeline(config, data);

    EvaluateResult result;
    result.audit = data.audit;
    for (const auto& line : fitted.audit) result.audit.push_back(line);

    const std::vector<int> predictions = fitted.model->predict(fitted.test.values);
    ConfusionMatrix confusion(fitted.model->classes());
    for (std::size_t i = 0; i < predictions.size(); ++i)
        confusion.add(fitted.test.labels[i], predictions[i]);
    const MetricsReport report = metrics(confusion, config.eval.averaging);

    json j;
    j["pipeline_id"] = config.hash();
    j["model"] = model_kind_name(config.model.kind);
    j["seed"] = config.seed;
    j["test"] = metrics_to_json(report, confusion);
    for (const auto& flag : report.flags) result.audit.push_back("metrics: " + flag);

    CvResult cv;
    const bool ran_cv = with_cv && config.eval.cv_folds >= 2;
    if (ran_cv) {
        const FeatureMatrix train_structural =
            take_rows(data.structural.matrix, fitted.train_rows);
        cv = cross_validate(config, train_structural, config.eval.cv_folds, config.seed);
        j["cv"] = cv_to_json(cv);
        std::ostringstream line;
        line << "cv: " << config.eval.cv_folds << "-fold mean accuracy " << cv.mean.accuracy;
        result.audit.push_back(line.str());
    }

    if (fitted.model->importance_gains()) {
        const auto importances = feature_importance(*fitted.model, fitted.feature_names);
        if (importances.empty()) {
            result.audit.push_back("importance: model has no splits");
            j["importances"] = json::object();
        } else {
            json imp = json::object();
            for (const auto& [name, frac] : importances) imp[name] = frac;
            j["importances"] = std::move(imp);
            result.importance_csv = importance_csv(importances);
        }
    }

    if (fitted.stages.pca)
        result.explained_variance_csv = explained_variance_csv(*fitted.stages.pca);

    result.report_json = std::move(j);
    result.report_csv =
        report_csv(model_kind_name(config.model.kind), report, ran_cv ? &cv : nullptr);
    return result;
}

std::string features_csv(const FeatureMatrix& m) {
    std::ostringstream out;
    for (std::size_t c = 0; c < m.feature_names.size(); ++c) out << m.feature_names[c] << ",";
    out << "Target\n";
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        for (std::size_t c = 0; c < m.n_features(); ++c)
            out << json(m.values(r, c)).dump() << ",";
        out << m.labels[r] << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write to '" + path + "'");
    out << content;
}

}  // namespace povml
