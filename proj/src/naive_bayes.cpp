#include "povml/naive_bayes.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"

namespace povml {

using nlohmann::json;

void NaiveBayesClassifier::fit(const Matrix& x, const std::vector<int>& labels,
                               std::span<const double> weights) {
    if (x.rows == 0) throw StageError("learners", "fit on empty input");
    encoding_ = LabelEncoding::from(labels);
    n_features_ = x.cols;
    const std::size_t n = x.rows;
    const std::size_t k = encoding_.k();
    const std::vector<std::size_t> y = encoding_.encode(labels);
    const std::vector<double> w = normalize_weights(weights, n);

    for (std::size_t f : categorical_features_)
        if (f >= x.cols)
            throw StageError("learners", "categorical feature index out of range");

    class_weight_totals_.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) class_weight_totals_[y[i]] += w[i];
    priors_.assign(k, 0.0);
    for (std::size_t c = 0; c < k; ++c)
        priors_[c] = class_weight_totals_[c] / static_cast<double>(n);

    std::vector<bool> is_categorical(x.cols, false);
    for (std::size_t f : categorical_features_) is_categorical[f] = true;

    categorical_.clear();
    gaussian_.clear();
    for (std::size_t f = 0; f < x.cols; ++f) {
        if (is_categorical[f]) {
            CategoricalFeature cf;
            cf.feature = f;
            for (std::size_t i = 0; i < n; ++i) {
                auto& row = cf.counts[x(i, f)];
                if (row.empty()) row.assign(k, 0.0);
                row[y[i]] += w[i];
            }
            categorical_.push_back(std::move(cf));
        } else {
            GaussianFeature gf;
            gf.feature = f;
            gf.mean.assign(k, 0.0);
            gf.variance.assign(k, 0.0);
            for (std::size_t i = 0; i < n; ++i) gf.mean[y[i]] += w[i] * x(i, f);
            for (std::size_t c = 0; c < k; ++c) gf.mean[c] /= class_weight_totals_[c];
            for (std::size_t i = 0; i < n; ++i) {
                const double d = x(i, f) - gf.mean[y[i]];
                gf.variance[y[i]] += w[i] * d * d;
            }
            for (std::size_t c = 0; c < k; ++c)
                gf.variance[c] = std::max(gf.variance[c] / class_weight_totals_[c],
                                          params_.var_floor);
            gaussian_.push_back(std::move(gf));
        }
    }
}

Matrix NaiveBayesClassifier::predict_proba(const Matrix& x) const {
    const std::size_t k = encoding_.k();
    Matrix out(x.rows, k);
    std::vector<double> log_post(k);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < k; ++c) log_post[c] = std::log(priors_[c]);

        for (const auto& cf : categorical_) {
            const double v = x(r, cf.feature);
            const auto it = cf.counts.find(v);
            const double vocab = static_cast<double>(cf.counts.size());
            for (std::size_t c = 0; c < k; ++c) {
                const double count = it == cf.counts.end() ? 0.0 : it->second[c];
                const double likelihood = (count + params_.alpha) /
                                          (class_weight_totals_[c] + params_.alpha * vocab);
                log_post[c] += std::log(std::max(likelihood, 1e-300));
            }
        }
        for (const auto& gf : gaussian_) {
            const double v = x(r, gf.feature);
            for (std::size_t c = 0; c < k; ++c) {
                const double var = gf.variance[c];
                const double d = v - gf.mean[c];
                log_post[c] += -0.5 * std::log(2.0 * M_PI * var) - d * d / (2.0 * var);
            }
        }

        double mx = log_post[0];
        for (std::size_t c = 1; c < k; ++c) mx = std::max(mx, log_post[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            out(r, c) = std::exp(log_post[c] - mx);
            sum += out(r, c);
        }
        for (std::size_t c = 0; c < k; ++c) out(r, c) /= sum;
    }
    return out;
}

json NaiveBayesClassifier::to_json() const {
    json cats = json::array();
    for (const auto& cf : categorical_) {
        json values = json::array();
        for (const auto& [v, counts] : cf.counts)
            values.push_back({{"value", v}, {"counts", counts}});
        cats.push_back({{"feature", cf.feature}, {"values", std::move(values)}});
    }
    json gaussians = json::array();
    for (const auto& gf : gaussian_)
        gaussians.push_back(
            {{"feature", gf.feature}, {"mean", gf.mean}, {"variance", gf.variance}});
    return json{{"format_version", kModelFormatVersion},
                {"model_type", model_type()},
                {"classes", encoding_.classes},
                {"n_features", n_features_},
                {"params", {{"alpha", params_.alpha}, {"var_floor", params_.var_floor}}},
                {"priors", priors_},
                {"class_weight_totals", class_weight_totals_},
                {"categorical", std::move(cats)},
                {"gaussian", std::move(gaussians)}};
}

std::unique_ptr<NaiveBayesClassifier> NaiveBayesClassifier::from_json(const json& j) {
    NaiveBayesParams p;
    p.alpha = j.at("params").at("alpha").get<double>();
    p.var_floor = j.at("params").at("var_floor").get<double>();
    auto model = std::make_unique<NaiveBayesClassifier>(p);
    model->encoding_.classes = j.at("classes").get<std::vector<int>>();
    model->n_features_ = j.at("n_features").get<std::size_t>();
    model->priors_ = j.at("priors").get<std::vector<double>>();
    model->class_weight_totals_ = j.at("class_weight_totals").get<std::vector<double>>();
    for (const auto& e : j.at("categorical")) {
        CategoricalFeature cf;
        cf.feature = e.at("feature").get<std::size_t>();
        for (const auto& v : e.at("values"))
            cf.counts[v.at("value").get<double>()] = v.at("counts").get<std::vector<double>>();
        model->categorical_features_.push_back(cf.feature);
        model->categorical_.push_back(std::move(cf));
    }
    for (const auto& e : j.at("gaussian")) {
        GaussianFeature gf;
        gf.feature = e.at("feature").get<std::size_t>();
        gf.mean = e.at("mean").get<std::vector<double>>();
        gf.variance = e.at("variance").get<std::vector<double>>();
        model->gaussian_.push_back(std::move(gf));
    }
    return model;
}

}  // namespace povml
