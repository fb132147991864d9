#include "povml/classifier.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/forest.hpp"
#include "povml/gbt.hpp"
#include "povml/knn.hpp"
#include "povml/naive_bayes.hpp"
#include "povml/tree.hpp"

namespace povml {

std::vector<int> Classifier::predict(const Matrix& x) const {
    const Matrix proba = predict_proba(x);
    const std::vector<int>& cls = classes();
    std::vector<int> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        std::size_t arg = 0;
        for (std::size_t c = 1; c < proba.cols; ++c)
            if (proba(r, c) > proba(r, arg)) arg = c;  // ties keep the lowest class
        out[r] = cls[arg];
    }
    return out;
}

LabelEncoding LabelEncoding::from(const std::vector<int>& labels) {
    if (labels.empty()) throw StageError("learners", "fit with no labels");
    std::set<int> distinct(labels.begin(), labels.end());
    LabelEncoding enc;
    enc.classes.assign(distinct.begin(), distinct.end());
    return enc;
}

std::vector<std::size_t> LabelEncoding::encode(const std::vector<int>& labels) const {
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), labels[i]);
        if (it == classes.end() || *it != labels[i])
            throw StageError("learners", "label " + std::to_string(labels[i]) +
                                             " not seen during encoding");
        out[i] = static_cast<std::size_t>(it - classes.begin());
    }
    return out;
}

std::vector<double> normalize_weights(std::span<const double> weights, std::size_t n) {
    if (weights.empty()) return std::vector<double>(n, 1.0);
    if (weights.size() != n)
        throw StageError("learners", "weight vector length does not match row count");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw StageError("learners", "negative sample weight");
        sum += w;
    }
    if (sum <= 0.0) throw StageError("learners", "sample weights sum to zero");
    const double scale = static_cast<double>(n) / sum;
    std::vector<double> out(weights.begin(), weights.end());
    for (double& w : out) w *= scale;
    return out;
}

std::unique_ptr<Classifier> load_classifier(const nlohmann::json& j) {
    const std::string type = j.at("model_type").get<std::string>();
    if (type == "tree") return DecisionTreeClassifier::from_json(j);
    if (type == "forest") return RandomForestClassifier::from_json(j);
    if (type == "gbt") return GradientBoostedTreesClassifier::from_json(j);
    if (type == "nb") return NaiveBayesClassifier::from_json(j);
    if (type == "knn") return KnnClassifier::from_json(j);
    throw InputError("unknown model_type '" + type + "' in model file");
}

}  // namespace povml
