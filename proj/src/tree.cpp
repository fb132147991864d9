#include "povml/tree.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/rng.hpp"

namespace povml {

using nlohmann::json;

double gini(std::span<const double> class_weights) {
    double total = 0.0;
    for (double w : class_weights) total += w;
    if (total <= 0.0) throw StageError("learners", "gini of all-zero class counts");
    double sum_sq = 0.0;
    for (double w : class_weights) {
        const double p = w / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

struct NodeStats {
    std::vector<double> class_w;  // weighted class counts
    double total_w = 0;
    std::size_t total_mult = 0;

    explicit NodeStats(std::size_t k) : class_w(k, 0.0) {}
    void add(std::size_t cls, double w, std::size_t m) {
        class_w[cls] += w;
        total_w += w;
        total_mult += m;
    }
};

double gini_of(const std::vector<double>& class_w, double total) {
    double sum_sq = 0.0;
    for (double w : class_w) {
        const double p = w / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

// Best split of one feature over the given rows, or nothing. Rows are scanned
// in (value, row) order so equal decreases keep the lowest threshold.
struct FeatureScan {
    bool found = false;
    double threshold = 0;
    double decrease = 0;
};

FeatureScan scan_feature(const Matrix& x, const std::vector<std::size_t>& y,
                         std::span<const double> w, std::span<const std::size_t> mult,
                         const std::vector<std::size_t>& rows, std::size_t feature,
                         const NodeStats& parent, std::size_t min_samples_leaf,
                         std::vector<std::pair<double, std::size_t>>& scratch) {
    scratch.clear();
    for (std::size_t r : rows) scratch.emplace_back(x(r, feature), r);
    std::sort(scratch.begin(), scratch.end());

    FeatureScan best;
    const double parent_gini = gini_of(parent.class_w, parent.total_w);

    std::vector<double> left_w(parent.class_w.size(), 0.0);
    double left_total = 0.0;
    std::size_t left_mult = 0;
    for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        const auto [value, r] = scratch[i];
        left_w[y[r]] += w[r];
        left_total += w[r];
        left_mult += mult[r];

        const double next_value = scratch[i + 1].first;
        if (next_value <= value) continue;
        if (left_mult < min_samples_leaf) continue;
        if (parent.total_mult - left_mult < min_samples_leaf) continue;

        const double right_total = parent.total_w - left_total;
        if (left_total <= 0.0 || right_total <= 0.0) continue;
        double left_sq = 0.0, right_sq = 0.0;
        for (std::size_t c = 0; c < left_w.size(); ++c) {
            const double lw = left_w[c];
            const double rw = parent.class_w[c] - lw;
            left_sq += (lw / left_total) * (lw / left_total);
            right_sq += (rw / right_total) * (rw / right_total);
        }
        const double child =
            (left_total * (1.0 - left_sq) + right_total * (1.0 - right_sq)) / parent.total_w;
        const double decrease = parent_gini - child;
        if (decrease > 0.0 && (!best.found || decrease > best.decrease)) {
            best.found = true;
            best.decrease = decrease;
            best.threshold = (value + next_value) / 2.0;
        }
    }
    return best;
}

std::optional<SplitCandidate> best_split_rows(const Matrix& x, const std::vector<std::size_t>& y,
                                              std::span<const double> w,
                                              std::span<const std::size_t> mult,
                                              const std::vector<std::size_t>& rows,
                                              const std::vector<std::size_t>& features,
                                              const NodeStats& parent,
                                              std::size_t min_samples_leaf,
                                              std::vector<std::pair<double, std::size_t>>& scratch) {
    std::optional<SplitCandidate> best;
    for (std::size_t f : features) {
        const FeatureScan scan =
            scan_feature(x, y, w, mult, rows, f, parent, min_samples_leaf, scratch);
        if (!scan.found) continue;
        if (!best || scan.decrease > best->decrease)
            best = SplitCandidate{f, scan.threshold, scan.decrease};
    }
    return best;
}

struct TreeBuilder {
    const Matrix& x;
    const std::vector<std::size_t>& y;
    std::span<const double> w;
    std::span<const std::size_t> mult;
    std::size_t n_classes;
    TreeParams params;
    Rng rng;
    Tree tree;
    std::vector<std::pair<double, std::size_t>> scratch;
    std::vector<std::size_t> all_features;

    TreeBuilder(const Matrix& x_, const std::vector<std::size_t>& y_, std::span<const double> w_,
                std::span<const std::size_t> mult_, std::size_t k_, const TreeParams& p_)
        : x(x_), y(y_), w(w_), mult(mult_), n_classes(k_), params(p_), rng(p_.seed) {
        all_features.resize(x.cols);
        for (std::size_t f = 0; f < x.cols; ++f) all_features[f] = f;
    }

    std::vector<std::size_t> pick_features() {
        const std::size_t m = params.features_per_split;
        if (m == 0 || m >= x.cols) return all_features;
        // partial Fisher-Yates over a fresh pool, then ascending for the
        // lowest-feature tie-break
        std::vector<std::size_t> pool = all_features;
        std::vector<std::size_t> picked;
        picked.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            picked.push_back(pool[i]);
        }
        std::sort(picked.begin(), picked.end());
        return picked;
    }

    int make_leaf(const NodeStats& stats, double gain_unused = 0) {
        (void)gain_unused;
        TreeNode node;
        node.dist.resize(n_classes, 0.0);
        for (std::size_t c = 0; c < n_classes; ++c) node.dist[c] = stats.class_w[c] / stats.total_w;
        tree.nodes.push_back(std::move(node));
        return static_cast<int>(tree.nodes.size() - 1);
    }

    int build(std::vector<std::size_t>& rows, int depth) {
        NodeStats stats(n_classes);
        for (std::size_t r : rows) stats.add(y[r], w[r], mult[r]);

        bool pure = true;
        for (std::size_t i = 1; i < rows.size() && pure; ++i) pure = y[rows[i]] == y[rows[0]];

        if (pure || (params.max_depth >= 0 && depth >= params.max_depth) ||
            stats.total_mult < params.min_samples_split)
            return make_leaf(stats);

        const std::vector<std::size_t> features = pick_features();
        const auto split = best_split_rows(x, y, w, mult, rows, features, stats,
                                           params.min_samples_leaf, scratch);
        if (!split) return make_leaf(stats);

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (x(r, split->feature) <= split->threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[id].feature = static_cast<int>(split->feature);
        tree.nodes[id].threshold = split->threshold;
        tree.nodes[id].gain = split->decrease * stats.total_w;

        const int left = build(left_rows, depth + 1);
        const int right = build(right_rows, depth + 1);
        tree.nodes[id].left = left;
        tree.nodes[id].right = right;
        return id;
    }
};

}  // namespace

std::optional<SplitCandidate> best_split(const Matrix& x, const std::vector<int>& labels,
                                         std::span<const double> weights,
                                         const std::vector<std::size_t>& candidate_features,
                                         std::size_t min_samples_leaf) {
    const LabelEncoding enc = LabelEncoding::from(labels);
    const std::vector<std::size_t> y = enc.encode(labels);
    const std::vector<double> w = normalize_weights(weights, labels.size());
    const std::vector<std::size_t> mult(labels.size(), 1);
    std::vector<std::size_t> rows(labels.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;

    NodeStats stats(enc.k());
    for (std::size_t r : rows) stats.add(y[r], w[r], mult[r]);
    std::vector<std::pair<double, std::size_t>> scratch;
    return best_split_rows(x, y, w, mult, rows, candidate_features, stats, min_samples_leaf,
                           scratch);
}

Tree fit_tree_impl(const Matrix& x, const std::vector<std::size_t>& y_enc, std::size_t n_classes,
                   std::span<const double> weights, std::span<const std::size_t> mult,
                   const std::vector<std::size_t>& rows, const TreeParams& params) {
    if (rows.empty()) throw StageError("learners", "fit_tree on empty input");
    TreeBuilder builder(x, y_enc, weights, mult, n_classes, params);
    std::vector<std::size_t> root_rows = rows;
    builder.build(root_rows, 0);
    return std::move(builder.tree);
}

const std::vector<double>& Tree::leaf_dist(const double* row) const {
    std::size_t id = 0;
    while (!nodes[id].is_leaf())
        id = row[nodes[id].feature] <= nodes[id].threshold
                 ? static_cast<std::size_t>(nodes[id].left)
                 : static_cast<std::size_t>(nodes[id].right);
    return nodes[id].dist;
}

void Tree::accumulate_gains(std::vector<double>& gains) const {
    for (const TreeNode& n : nodes)
        if (!n.is_leaf()) gains[static_cast<std::size_t>(n.feature)] += n.gain;
}

json Tree::to_json() const {
    json arr = json::array();
    for (const TreeNode& n : nodes) {
        if (n.is_leaf()) {
            arr.push_back({{"dist", n.dist}});
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

Tree Tree::from_json(const json& j) {
    Tree tree;
    for (const auto& e : j) {
        TreeNode n;
        if (e.contains("dist")) {
            n.dist = e.at("dist").get<std::vector<double>>();
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

void DecisionTreeClassifier::fit(const Matrix& x, const std::vector<int>& labels,
                                 std::span<const double> weights) {
    if (x.rows == 0) throw StageError("learners", "fit on empty input");
    encoding_ = LabelEncoding::from(labels);
    n_features_ = x.cols;
    const std::vector<std::size_t> y = encoding_.encode(labels);
    const std::vector<double> w = normalize_weights(weights, labels.size());
    const std::vector<std::size_t> mult(labels.size(), 1);
    std::vector<std::size_t> rows(labels.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    tree_ = fit_tree_impl(x, y, encoding_.k(), w, mult, rows, params_);
}

Matrix DecisionTreeClassifier::predict_proba(const Matrix& x) const {
    Matrix out(x.rows, encoding_.k());
    for (std::size_t r = 0; r < x.rows; ++r) {
        const std::vector<double>& dist = tree_.leaf_dist(x.row_ptr(r));
        for (std::size_t c = 0; c < dist.size(); ++c) out(r, c) = dist[c];
    }
    return out;
}

std::optional<std::vector<double>> DecisionTreeClassifier::importance_gains() const {
    std::vector<double> gains(n_features_, 0.0);
    tree_.accumulate_gains(gains);
    return gains;
}

json DecisionTreeClassifier::to_json() const {
    return json{{"format_version", kModelFormatVersion},
                {"model_type", model_type()},
                {"classes", encoding_.classes},
                {"n_features", n_features_},
                {"params",
                 {{"max_depth", params_.max_depth},
                  {"min_samples_split", params_.min_samples_split},
                  {"min_samples_leaf", params_.min_samples_leaf},
                  {"features_per_split", params_.features_per_split},
                  {"seed", params_.seed}}},
                {"tree", tree_.to_json()}};
}

std::unique_ptr<DecisionTreeClassifier> DecisionTreeClassifier::from_json(const json& j) {
    TreeParams p;
    const json& jp = j.at("params");
    p.max_depth = jp.at("max_depth").get<int>();
    p.min_samples_split = jp.at("min_samples_split").get<std::size_t>();
    p.min_samples_leaf = jp.at("min_samples_leaf").get<std::size_t>();
    p.features_per_split = jp.at("features_per_split").get<std::size_t>();
    p.seed = jp.at("seed").get<std::uint64_t>();
    auto model = std::make_unique<DecisionTreeClassifier>(p);
    model->encoding_.classes = j.at("classes").get<std::vector<int>>();
    model->n_features_ = j.at("n_features").get<std::size_t>();
    model->tree_ = Tree::from_json(j.at("tree"));
    return model;
}

}  // namespace povml
