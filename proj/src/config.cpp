#include "povml/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/forest.hpp"
#include "povml/gbt.hpp"
#include "povml/knn.hpp"
#include "povml/naive_bayes.hpp"
#include "povml/tree.hpp"

namespace povml {

using nlohmann::json;

const char* model_kind_name(ModelKind m) {
    switch (m) {
        case ModelKind::tree: return "tree";
        case ModelKind::forest: return "forest";
        case ModelKind::gbt: return "gbt";
        case ModelKind::nb: return "nb";
        case ModelKind::knn: return "knn";
    }
    return "?";
}

std::optional<ModelKind> model_kind_from_name(const std::string& s) {
    if (s == "tree") return ModelKind::tree;
    if (s == "forest") return ModelKind::forest;
    if (s == "gbt") return ModelKind::gbt;
    if (s == "nb") return ModelKind::nb;
    if (s == "knn") return ModelKind::knn;
    return std::nullopt;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig c;
    c.dataset = j.value("dataset", std::string{});
    c.seed = j.value("seed", 0ull);
    c.threads = j.value("threads", 0);
    c.schema_path = j.value("schema", std::string{});
    c.wrangle_plan_path = j.value("wrangle_plan", std::string{});

    if (j.contains("scale")) {
        const auto cols =
            j["scale"].value("minmax_columns", std::vector<std::string>{"dependency"});
        c.scale_minmax_columns = std::set<std::string>(cols.begin(), cols.end());
    }
    if (j.contains("pca")) {
        c.pca.enabled = j["pca"].value("enabled", false);
        c.pca.k = j["pca"].value("k", 60u);
    }
    if (j.contains("balance")) {
        const std::string method = j["balance"].value("method", std::string{"none"});
        auto m = balance_method_from_name(method);
        if (!m) throw InputError("config: unknown balance method '" + method + "'");
        c.balance.method = *m;
        c.balance.smote_k = j["balance"].value("smote_k", 5u);
        if (j["balance"].contains("seed"))
            c.balance.seed = j["balance"]["seed"].get<std::uint64_t>();
        if (c.balance.smote_k < 1) throw InputError("config: smote_k must be >= 1");
    }
    if (j.contains("model")) {
        const json& m = j["model"];
        const std::string type = m.value("type", std::string{"forest"});
        auto kind = model_kind_from_name(type);
        if (!kind) throw InputError("config: unknown model type '" + type + "'");
        c.model.kind = *kind;
        c.model.n_trees = m.value("n_trees", 500u);
        c.model.max_depth = m.value("max_depth", -1);
        c.model.min_samples_split = m.value("min_samples_split", 2u);
        c.model.min_samples_leaf = m.value("min_samples_leaf", 1u);
        c.model.features_per_split = m.value("features_per_split", 0u);
        c.model.iterations = m.value("iterations", 300u);
        c.model.learning_rate = m.value("learning_rate", 0.1);
        c.model.gbt_max_depth = m.value("gbt_max_depth", 3);
        c.model.subsample = m.value("subsample", 1.0);
        c.model.alpha = m.value("alpha", 1.0);
        c.model.var_floor = m.value("var_floor", 1e-9);
        c.model.knn_k = m.value("k", 5u);
        if (c.model.learning_rate <= 0.0 || c.model.learning_rate > 1.0)
            throw InputError("config: learning_rate must be in (0, 1]");
        if (c.model.subsample <= 0.0 || c.model.subsample > 1.0)
            throw InputError("config: subsample must be in (0, 1]");
        if (c.model.n_trees < 1) throw InputError("config: n_trees must be >= 1");
        if (c.model.iterations < 1) throw InputError("config: iterations must be >= 1");
        if (c.model.knn_k < 1) throw InputError("config: knn k must be >= 1");
    }
    if (j.contains("eval")) {
        const json& e = j["eval"];
        c.eval.test_fraction = e.value("test_fraction", 0.2);
        c.eval.cv_folds = e.value("cv_folds", 5u);
        c.eval.stratified = e.value("stratified", true);
        const std::string avg = e.value("averaging", std::string{"macro"});
        if (avg == "macro")
            c.eval.averaging = Averaging::macro;
        else if (avg == "weighted")
            c.eval.averaging = Averaging::weighted;
        else
            throw InputError("config: unknown averaging '" + avg + "'");
        if (c.eval.test_fraction <= 0.0 || c.eval.test_fraction >= 1.0)
            throw InputError("config: test_fraction must be in (0, 1)");
        if (c.eval.cv_folds < 2) throw InputError("config: cv_folds must be >= 2");
    }
    return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

json PipelineConfig::to_json() const {
    json j;
    j["dataset"] = dataset;
    j["seed"] = seed;
    j["threads"] = threads;
    j["schema"] = schema_path;
    j["wrangle_plan"] = wrangle_plan_path;
    j["scale"] = {{"minmax_columns",
                   std::vector<std::string>(scale_minmax_columns.begin(),
                                            scale_minmax_columns.end())}};
    j["pca"] = {{"enabled", pca.enabled}, {"k", pca.k}};
    json b{{"method", balance_method_name(balance.method)}, {"smote_k", balance.smote_k}};
    if (balance.seed) b["seed"] = *balance.seed;
    j["balance"] = std::move(b);
    j["model"] = {{"type", model_kind_name(model.kind)},
                  {"n_trees", model.n_trees},
                  {"max_depth", model.max_depth},
                  {"min_samples_split", model.min_samples_split},
                  {"min_samples_leaf", model.min_samples_leaf},
                  {"features_per_split", model.features_per_split},
                  {"iterations", model.iterations},
                  {"learning_rate", model.learning_rate},
                  {"gbt_max_depth", model.gbt_max_depth},
                  {"subsample", model.subsample},
                  {"alpha", model.alpha},
                  {"var_floor", model.var_floor},
                  {"k", model.knn_k}};
    j["eval"] = {{"test_fraction", eval.test_fraction},
                 {"cv_folds", eval.cv_folds},
                 {"stratified", eval.stratified},
                 {"averaging", eval.averaging == Averaging::macro ? "macro" : "weighted"}};
    return j;
}

std::string PipelineConfig::hash() const {
    // worker count is an execution detail, not part of the experiment
    json canonical = to_json();
    canonical.erase("threads");
    const std::string dump = canonical.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

std::unique_ptr<Classifier> make_classifier(const ModelConfig& config, std::uint64_t seed,
                                            std::vector<std::size_t> categorical_features) {
    switch (config.kind) {
        case ModelKind::tree: {
            TreeParams p;
            p.max_depth = config.max_depth;
            p.min_samples_split = config.min_samples_split;
            p.min_samples_leaf = config.min_samples_leaf;
            p.features_per_split = config.features_per_split;
            p.seed = seed;
            return std::make_unique<DecisionTreeClassifier>(p);
        }
        case ModelKind::forest: {
            ForestParams p;
            p.n_trees = config.n_trees;
            p.tree.max_depth = config.max_depth;
            p.tree.min_samples_split = config.min_samples_split;
            p.tree.min_samples_leaf = config.min_samples_leaf;
            p.tree.features_per_split = config.features_per_split;
            p.bootstrap = true;
            p.seed = seed;
            return std::make_unique<RandomForestClassifier>(p);
        }
        case ModelKind::gbt: {
            GbtParams p;
            p.iterations = config.iterations;
            p.learning_rate = config.learning_rate;
            p.max_depth = config.gbt_max_depth;
            p.min_samples_leaf = config.min_samples_leaf;
            p.subsample = config.subsample;
            p.seed = seed;
            return std::make_unique<GradientBoostedTreesClassifier>(p);
        }
        case ModelKind::nb: {
            NaiveBayesParams p;
            p.alpha = config.alpha;
            p.var_floor = config.var_floor;
            return std::make_unique<NaiveBayesClassifier>(p, std::move(categorical_features));
        }
        case ModelKind::knn: {
            KnnParams p;
            p.k = config.knn_k;
            return std::make_unique<KnnClassifier>(p);
        }
    }
    throw InputError("config: unknown model kind");
}

}  // namespace povml
