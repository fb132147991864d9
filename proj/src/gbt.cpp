#include "povml/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/kernels.hpp"
#include "povml/rng.hpp"
#include "povml/threading.hpp"

namespace povml {

using nlohmann::json;

double RegTree::predict_row(const double* row) const {
    std::size_t id = 0;
    while (!nodes[id].is_leaf())
        id = row[nodes[id].feature] <= nodes[id].threshold
                 ? static_cast<std::size_t>(nodes[id].left)
                 : static_cast<std::size_t>(nodes[id].right);
    return nodes[id].value;
}

void RegTree::accumulate_gains(std::vector<double>& gains) const {
    for (const RegNode& n : nodes)
        if (!n.is_leaf()) gains[static_cast<std::size_t>(n.feature)] += n.gain;
}

json RegTree::to_json() const {
    json arr = json::array();
    for (const RegNode& n : nodes) {
        if (n.is_leaf()) {
            arr.push_back({{"v", n.value}});
        } else {
            arr.push_back({{"f", n.feature},
                           {"t", n.threshold},
                           {"l", n.left},
                           {"r", n.right},
                           {"gain", n.gain}});
        }
    }
    return arr;
}

RegTree RegTree::from_json(const json& j) {
    RegTree tree;
    for (const auto& e : j) {
        RegNode n;
        if (e.contains("v")) {
            n.value = e.at("v").get<double>();
        } else {
            n.feature = e.at("f").get<int>();
            n.threshold = e.at("t").get<double>();
            n.left = e.at("l").get<int>();
            n.right = e.at("r").get<int>();
            n.gain = e.value("gain", 0.0);
        }
        tree.nodes.push_back(std::move(n));
    }
    return tree;
}

namespace {

// Squared-error regression tree grown level by level over presorted feature
// orders: one pass per (feature, level) accumulates left-side sums for every
// open node at once, so depth-limited stages cost O(depth * p * n).
RegTree build_reg_tree(const Matrix& x, const std::vector<std::vector<std::uint32_t>>& presorted,
                       const std::vector<int>& initial_node_of, std::span<const double> residual,
                       std::span<const double> w, double newton_scale, int max_depth,
                       std::size_t min_samples_leaf) {
    const std::size_t n = x.rows;
    const std::size_t p = x.cols;
    const int depth_cap = max_depth < 0 ? 64 : max_depth;

    RegTree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of = initial_node_of;
    std::vector<int> level = {0};

    struct Best {
        bool found = false;
        double gain = 0;
        double threshold = 0;
        int feature = -1;
    };

    for (int depth = 0; depth < depth_cap && !level.empty(); ++depth) {
        const std::size_t nslots = level.size();
        std::vector<int> slot_of(tree.nodes.size(), -1);
        for (std::size_t s = 0; s < nslots; ++s) slot_of[static_cast<std::size_t>(level[s])] = static_cast<int>(s);

        std::vector<double> tot_w(nslots, 0.0), tot_wr(nslots, 0.0);
        std::vector<std::size_t> tot_n(nslots, 0);
        for (std::size_t row = 0; row < n; ++row) {
            const int nid = node_of[row];
            if (nid < 0) continue;
            const int s = slot_of[static_cast<std::size_t>(nid)];
            if (s < 0) continue;
            tot_w[static_cast<std::size_t>(s)] += w[row];
            tot_wr[static_cast<std::size_t>(s)] += w[row] * residual[row];
            ++tot_n[static_cast<std::size_t>(s)];
        }

        std::vector<Best> bests(p * nslots);
        const long long pp = static_cast<long long>(p);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
        for (long long f = 0; f < pp; ++f) {
            std::vector<double> lw(nslots, 0.0), lwr(nslots, 0.0), prev(nslots, 0.0);
            std::vector<std::size_t> lcnt(nslots, 0);
            std::vector<char> has_prev(nslots, 0);
            Best* out = bests.data() + static_cast<std::size_t>(f) * nslots;
            for (const std::uint32_t row : presorted[static_cast<std::size_t>(f)]) {
                const int nid = node_of[row];
                if (nid < 0) continue;
                const int si = slot_of[static_cast<std::size_t>(nid)];
                if (si < 0) continue;
                const std::size_t s = static_cast<std::size_t>(si);
                const double v = x(row, static_cast<std::size_t>(f));
                if (has_prev[s] && v > prev[s] && lcnt[s] >= min_samples_leaf &&
                    tot_n[s] - lcnt[s] >= min_samples_leaf && lw[s] > 0.0 &&
                    tot_w[s] - lw[s] > 0.0) {
                    const double rw = tot_w[s] - lw[s];
                    const double rwr = tot_wr[s] - lwr[s];
                    const double gain = lwr[s] * lwr[s] / lw[s] + rwr * rwr / rw -
                                        tot_wr[s] * tot_wr[s] / tot_w[s];
                    if (gain > 0.0 && (!out[s].found || gain > out[s].gain)) {
                        out[s].found = true;
                        out[s].gain = gain;
                        out[s].threshold = (prev[s] + v) / 2.0;
                        out[s].feature = static_cast<int>(f);
                    }
                }
                lw[s] += w[row];
                lwr[s] += w[row] * residual[row];
                ++lcnt[s];
                prev[s] = v;
                has_prev[s] = 1;
            }
        }

        // lowest feature index wins ties (strict > while scanning ascending)
        std::vector<int> next_level;
        for (std::size_t s = 0; s < nslots; ++s) {
            Best best;
            for (std::size_t f = 0; f < p; ++f) {
                const Best& b = bests[f * nslots + s];
                if (b.found && (!best.found || b.gain > best.gain)) best = b;
            }
            if (!best.found) continue;  // stays a leaf
            const int nid = level[s];
            const int left = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            const int right = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            RegNode& node = tree.nodes[static_cast<std::size_t>(nid)];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.left = left;
            node.right = right;
            node.gain = best.gain;
            next_level.push_back(left);
            next_level.push_back(right);
        }
        if (next_level.empty()) break;

        for (std::size_t row = 0; row < n; ++row) {
            const int nid = node_of[row];
            if (nid < 0) continue;
            const RegNode& node = tree.nodes[static_cast<std::size_t>(nid)];
            if (node.is_leaf()) continue;
            node_of[row] = x(row, static_cast<std::size_t>(node.feature)) <= node.threshold
                               ? node.left
                               : node.right;
        }
        level = std::move(next_level);
    }

    // One-step Newton leaf values on the rows that reached each leaf.
    std::vector<double> num(tree.nodes.size(), 0.0), den(tree.nodes.size(), 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        int nid = node_of[row];
        if (nid < 0) continue;
        // rows may still sit on a node split in the final level
        while (!tree.nodes[static_cast<std::size_t>(nid)].is_leaf()) {
            const RegNode& node = tree.nodes[static_cast<std::size_t>(nid)];
            nid = x(row, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left
                                                                                   : node.right;
        }
        const double r = residual[row];
        num[static_cast<std::size_t>(nid)] += w[row] * r;
        den[static_cast<std::size_t>(nid)] += w[row] * std::abs(r) * (1.0 - std::abs(r));
    }
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (!tree.nodes[i].is_leaf()) continue;
        tree.nodes[i].value = den[i] > 0.0 ? newton_scale * num[i] / den[i] : 0.0;
    }
    return tree;
}

}  // namespace

void GradientBoostedTreesClassifier::fit(const Matrix& x, const std::vector<int>& labels,
                                         std::span<const double> weights) {
    if (x.rows == 0) throw StageError("learners", "fit on empty input");
    encoding_ = LabelEncoding::from(labels);
    if (encoding_.k() < 2)
        throw StageError("learners", "gradient boosting needs at least 2 classes");
    n_features_ = x.cols;
    const std::size_t n = x.rows;
    const std::size_t k = encoding_.k();
    const std::vector<std::size_t> y = encoding_.encode(labels);
    const std::vector<double> w = normalize_weights(weights, n);

    // presort every feature once; subsampling only masks rows
    std::vector<std::vector<std::uint32_t>> presorted(x.cols);
    const long long pp = static_cast<long long>(x.cols);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
    for (long long f = 0; f < pp; ++f) {
        auto& order = presorted[static_cast<std::size_t>(f)];
        order.resize(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double va = x(a, static_cast<std::size_t>(f));
            const double vb = x(b, static_cast<std::size_t>(f));
            if (va != vb) return va < vb;
            return a < b;
        });
    }

    init_scores_.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) init_scores_[y[i]] += w[i];
    for (std::size_t c = 0; c < k; ++c)
        init_scores_[c] = std::log(init_scores_[c] / static_cast<double>(n));

    Matrix scores(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < k; ++c) scores(i, c) = init_scores_[c];

    const double newton_scale = (static_cast<double>(k) - 1.0) / static_cast<double>(k);
    stages_.clear();
    training_loss_.clear();

    std::vector<std::size_t> row_pool(n);
    std::iota(row_pool.begin(), row_pool.end(), 0);

    for (std::size_t iter = 0; iter < params_.iterations; ++iter) {
        Matrix proba;
        kernels::softmax_rows(scores, proba);

        std::vector<int> node_of(n, 0);
        if (params_.subsample < 1.0) {
            Rng rng(Rng::derive(params_.seed, 1000 + iter));
            rng.shuffle(row_pool);
            const std::size_t m = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::floor(params_.subsample * static_cast<double>(n))));
            node_of.assign(n, -1);
            for (std::size_t i = 0; i < m; ++i) node_of[row_pool[i]] = 0;
        }

        std::vector<RegTree> iter_trees(k);
        const long long kk = static_cast<long long>(k);
#pragma omp parallel for schedule(static, 1) num_threads(thread_count())
        for (long long c = 0; c < kk; ++c) {
            std::vector<double> residual(n);
            for (std::size_t i = 0; i < n; ++i)
                residual[i] = (y[i] == static_cast<std::size_t>(c) ? 1.0 : 0.0) -
                              proba(i, static_cast<std::size_t>(c));
            iter_trees[static_cast<std::size_t>(c)] =
                build_reg_tree(x, presorted, node_of, residual, w, newton_scale,
                               params_.max_depth, params_.min_samples_leaf);
        }

#pragma omp parallel for schedule(static, 1) num_threads(thread_count())
        for (long long c = 0; c < kk; ++c) {
            const RegTree& tree = iter_trees[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < n; ++i)
                scores(i, static_cast<std::size_t>(c)) +=
                    params_.learning_rate * tree.predict_row(x.row_ptr(i));
        }
        stages_.push_back(std::move(iter_trees));

        Matrix after;
        kernels::softmax_rows(scores, after);
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            loss -= w[i] * std::log(std::max(after(i, y[i]), 1e-300));
        training_loss_.push_back(loss / static_cast<double>(n));
    }
}

Matrix GradientBoostedTreesClassifier::score_matrix(const Matrix& x) const {
    const std::size_t k = encoding_.k();
    Matrix scores(x.rows, k);
    const long long n = static_cast<long long>(x.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long r = 0; r < n; ++r) {
        const double* row = x.row_ptr(static_cast<std::size_t>(r));
        for (std::size_t c = 0; c < k; ++c) {
            double s = init_scores_[c];
            for (const auto& stage : stages_) s += params_.learning_rate * stage[c].predict_row(row);
            scores(static_cast<std::size_t>(r), c) = s;
        }
    }
    return scores;
}

Matrix GradientBoostedTreesClassifier::predict_proba(const Matrix& x) const {
    Matrix proba;
    kernels::softmax_rows(score_matrix(x), proba);
    return proba;
}

std::optional<std::vector<double>> GradientBoostedTreesClassifier::importance_gains() const {
    std::vector<double> gains(n_features_, 0.0);
    for (const auto& stage : stages_)
        for (const RegTree& tree : stage) tree.accumulate_gains(gains);
    return gains;
}

json GradientBoostedTreesClassifier::to_json() const {
    json stages = json::array();
    for (const auto& stage : stages_) {
        json per_class = json::array();
        for (const RegTree& t : stage) per_class.push_back(t.to_json());
        stages.push_back(std::move(per_class));
    }
    return json{{"format_version", kModelFormatVersion},
                {"model_type", model_type()},
                {"classes", encoding_.classes},
                {"n_features", n_features_},
                {"init_scores", init_scores_},
                {"training_loss", training_loss_},
                {"params",
                 {{"iterations", params_.iterations},
                  {"learning_rate", params_.learning_rate},
                  {"max_depth", params_.max_depth},
                  {"min_samples_leaf", params_.min_samples_leaf},
                  {"subsample", params_.subsample},
                  {"seed", params_.seed}}},
                {"stages", std::move(stages)}};
}

std::unique_ptr<GradientBoostedTreesClassifier> GradientBoostedTreesClassifier::from_json(
    const json& j) {
    GbtParams p;
    const json& jp = j.at("params");
    p.iterations = jp.at("iterations").get<std::size_t>();
    p.learning_rate = jp.at("learning_rate").get<double>();
    p.max_depth = jp.at("max_depth").get<int>();
    p.min_samples_leaf = jp.at("min_samples_leaf").get<std::size_t>();
    p.subsample = jp.at("subsample").get<double>();
    p.seed = jp.at("seed").get<std::uint64_t>();
    auto model = std::make_unique<GradientBoostedTreesClassifier>(p);
    model->encoding_.classes = j.at("classes").get<std::vector<int>>();
    model->n_features_ = j.at("n_features").get<std::size_t>();
    model->init_scores_ = j.at("init_scores").get<std::vector<double>>();
    model->training_loss_ = j.at("training_loss").get<std::vector<double>>();
    for (const auto& stage : j.at("stages")) {
        std::vector<RegTree> trees;
        for (const auto& t : stage) trees.push_back(RegTree::from_json(t));
        model->stages_.push_back(std::move(trees));
    }
    return model;
}

}  // namespace povml
