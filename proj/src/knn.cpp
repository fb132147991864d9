#include "povml/knn.hpp"

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/kernels.hpp"

namespace povml {

using nlohmann::json;

void KnnClassifier::fit(const Matrix& x, const std::vector<int>& labels,
                        std::span<const double> weights) {
    if (x.rows == 0) throw StageError("learners", "fit on empty input");
    if (params_.k < 1 || params_.k > x.rows)
        throw StageError("learners", "knn k=" + std::to_string(params_.k) +
                                         " out of range for " + std::to_string(x.rows) + " rows");
    encoding_ = LabelEncoding::from(labels);
    train_ = x;
    y_ = encoding_.encode(labels);
    w_ = normalize_weights(weights, labels.size());
}

Matrix KnnClassifier::predict_proba(const Matrix& x) const {
    const std::size_t k = encoding_.k();
    Matrix out(x.rows, k);
    std::vector<kernels::NeighborList> neighbors;
    kernels::knn_search(train_, x, params_.k, neighbors);
    for (std::size_t r = 0; r < x.rows; ++r) {
        double total = 0.0;
        for (const auto& [idx, dist] : neighbors[r]) {
            out(r, y_[idx]) += w_[idx];
            total += w_[idx];
        }
        for (std::size_t c = 0; c < k; ++c) out(r, c) /= total;
    }
    return out;
}

json KnnClassifier::to_json() const {
    json rows = json::array();
    for (std::size_t r = 0; r < train_.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < train_.cols; ++c) row.push_back(train_(r, c));
        rows.push_back(std::move(row));
    }
    return json{{"format_version", kModelFormatVersion},
                {"model_type", model_type()},
                {"classes", encoding_.classes},
                {"params", {{"k", params_.k}}},
                {"train", std::move(rows)},
                {"labels", y_},
                {"weights", w_}};
}

std::unique_ptr<KnnClassifier> KnnClassifier::from_json(const json& j) {
    KnnParams p;
    p.k = j.at("params").at("k").get<std::size_t>();
    auto model = std::make_unique<KnnClassifier>(p);
    model->encoding_.classes = j.at("classes").get<std::vector<int>>();
    const auto rows = j.at("train").get<std::vector<std::vector<double>>>();
    model->train_ = Matrix(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) model->train_(r, c) = rows[r][c];
    model->y_ = j.at("labels").get<std::vector<std::size_t>>();
    model->w_ = j.at("weights").get<std::vector<double>>();
    return model;
}

}  // namespace povml
