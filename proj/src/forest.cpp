#include "povml/forest.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/rng.hpp"
#include "povml/threading.hpp"

namespace povml {

using nlohmann::json;

void RandomForestClassifier::fit(const Matrix& x, const std::vector<int>& labels,
                                 std::span<const double> weights) {
    if (x.rows == 0) throw StageError("learners", "fit on empty input");
    encoding_ = LabelEncoding::from(labels);
    n_features_ = x.cols;
    const std::vector<std::size_t> y = encoding_.encode(labels);
    const std::vector<double> base_w = normalize_weights(weights, labels.size());
    const std::size_t n = x.rows;

    TreeParams tree_params = params_.tree;
    if (tree_params.features_per_split == 0)
        tree_params.features_per_split =
            static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols))));

    trees_.assign(params_.n_trees, Tree{});
    const long long n_trees = static_cast<long long>(params_.n_trees);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long long t = 0; t < n_trees; ++t) {
        const std::uint64_t tree_seed = Rng::derive(params_.seed, static_cast<std::uint64_t>(t));
        Rng rng(tree_seed);

        // Bootstrap as multiplicities: rows drawn with replacement enter the
        // tree once with their draw count, which is equivalent to duplicating
        // them and much cheaper to sort.
        std::vector<std::size_t> mult(n, params_.bootstrap ? 0 : 1);
        if (params_.bootstrap)
            for (std::size_t i = 0; i < n; ++i) ++mult[rng.below(n)];

        std::vector<double> w(n, 0.0);
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i) {
            if (mult[i] == 0) continue;
            w[i] = base_w[i] * static_cast<double>(mult[i]);
            rows.push_back(i);
        }

        TreeParams p = tree_params;
        p.seed = Rng::derive(tree_seed, 0x7265656eULL);
        trees_[static_cast<std::size_t>(t)] =
            fit_tree_impl(x, y, encoding_.k(), w, mult, rows, p);
    }
}

Matrix RandomForestClassifier::predict_proba(const Matrix& x) const {
    const std::size_t k = encoding_.k();
    Matrix out(x.rows, k);
    const long long n = static_cast<long long>(x.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long r = 0; r < n; ++r) {
        const double* row = x.row_ptr(static_cast<std::size_t>(r));
        for (const Tree& tree : trees_) {
            const std::vector<double>& dist = tree.leaf_dist(row);
            for (std::size_t c = 0; c < k; ++c) out(static_cast<std::size_t>(r), c) += dist[c];
        }
        for (std::size_t c = 0; c < k; ++c)
            out(static_cast<std::size_t>(r), c) /= static_cast<double>(trees_.size());
    }
    return out;
}

std::optional<std::vector<double>> RandomForestClassifier::importance_gains() const {
    std::vector<double> gains(n_features_, 0.0);
    for (const Tree& tree : trees_) tree.accumulate_gains(gains);
    return gains;
}

json RandomForestClassifier::to_json() const {
    json trees = json::array();
    for (const Tree& t : trees_) trees.push_back(t.to_json());
    return json{{"format_version", kModelFormatVersion},
                {"model_type", model_type()},
                {"classes", encoding_.classes},
                {"n_features", n_features_},
                {"params",
                 {{"n_trees", params_.n_trees},
                  {"bootstrap", params_.bootstrap},
                  {"seed", params_.seed},
                  {"max_depth", params_.tree.max_depth},
                  {"min_samples_split", params_.tree.min_samples_split},
                  {"min_samples_leaf", params_.tree.min_samples_leaf},
                  {"features_per_split", params_.tree.features_per_split}}},
                {"trees", std::move(trees)}};
}

std::unique_ptr<RandomForestClassifier> RandomForestClassifier::from_json(const json& j) {
    ForestParams p;
    const json& jp = j.at("params");
    p.n_trees = jp.at("n_trees").get<std::size_t>();
    p.bootstrap = jp.at("bootstrap").get<bool>();
    p.seed = jp.at("seed").get<std::uint64_t>();
    p.tree.max_depth = jp.at("max_depth").get<int>();
    p.tree.min_samples_split = jp.at("min_samples_split").get<std::size_t>();
    p.tree.min_samples_leaf = jp.at("min_samples_leaf").get<std::size_t>();
    p.tree.features_per_split = jp.at("features_per_split").get<std::size_t>();
    auto model = std::make_unique<RandomForestClassifier>(p);
    model->encoding_.classes = j.at("classes").get<std::vector<int>>();
    model->n_features_ = j.at("n_features").get<std::size_t>();
    for (const auto& t : j.at("trees")) model->trees_.push_back(Tree::from_json(t));
    return model;
}

}  // namespace povml
