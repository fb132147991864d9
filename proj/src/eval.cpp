#include "povml/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/rng.hpp"
#include "povml/stages.hpp"

namespace povml {

using nlohmann::json;

namespace {
std::map<int, std::vector<std::size_t>> rows_by_class(const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    return by_class;
}
}  // namespace

SplitIndices split_80_20(const std::vector<int>& labels, std::uint64_t seed, bool stratified,
                         double test_fraction) {
    const std::size_t n = labels.size();
    if (n < 5) throw StageError("eval", "split needs at least 5 rows");
    const std::size_t test_count = static_cast<std::size_t>(
        std::floor(test_fraction * static_cast<double>(n) + 0.5));  // round half up

    SplitIndices out;
    out.seed = seed;
    Rng rng(Rng::derive(seed, seed_stream::kSplit));
    std::vector<unsigned char> in_test(n, 0);

    if (stratified) {
        auto by_class = rows_by_class(labels);
        if (n < by_class.size())
            throw StageError("eval", "fewer rows than classes in a stratified split");

        // largest-remainder apportionment of the test count across classes
        struct Share {
            int cls;
            std::size_t base;
            double frac;
        };
        std::vector<Share> shares;
        std::size_t assigned = 0;
        for (const auto& [cls, rows] : by_class) {
            const double target = test_fraction * static_cast<double>(rows.size());
            Share s{cls, static_cast<std::size_t>(std::floor(target)),
                    target - std::floor(target)};
            assigned += s.base;
            shares.push_back(s);
        }
        std::vector<std::size_t> order(shares.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return shares[a].frac > shares[b].frac;
        });
        for (std::size_t i = 0; i < order.size() && assigned < test_count; ++i) {
            ++shares[order[i]].base;
            ++assigned;
        }

        for (const Share& s : shares) {
            auto rows = by_class.at(s.cls);
            rng.shuffle(rows);
            const std::size_t take = std::min(s.base, rows.size());
            for (std::size_t i = 0; i < take; ++i) in_test[rows[i]] = 1;
        }
    } else {
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), 0);
        rng.shuffle(rows);
        for (std::size_t i = 0; i < test_count; ++i) in_test[rows[i]] = 1;
    }

    for (std::size_t i = 0; i < n; ++i)
        (in_test[i] ? out.test_rows : out.train_rows).push_back(i);
    return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels,
                                                       std::size_t k, std::uint64_t seed) {
    if (k < 2) throw StageError("eval", "k-fold needs k >= 2");
    auto by_class = rows_by_class(labels);
    for (const auto& [cls, rows] : by_class)
        if (rows.size() < k)
            throw StageError("eval", "class " + std::to_string(cls) + " has " +
                                         std::to_string(rows.size()) + " members, fewer than k=" +
                                         std::to_string(k));

    Rng rng(Rng::derive(seed, seed_stream::kSplit));
    std::vector<std::vector<std::size_t>> folds(k);
    for (auto& [cls, rows] : by_class) {
        rng.shuffle(rows);
        // consecutive chunks; the first (n_c mod k) folds take one extra
        const std::size_t base = rows.size() / k;
        const std::size_t extra = rows.size() % k;
        std::size_t pos = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const std::size_t take = base + (f < extra ? 1 : 0);
            for (std::size_t i = 0; i < take; ++i) folds[f].push_back(rows[pos++]);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

ConfusionMatrix::ConfusionMatrix(std::vector<int> classes) : classes_(std::move(classes)) {
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
    counts_.assign(classes_.size() * classes_.size(), 0);
}

void ConfusionMatrix::add(int truth, int predicted) {
    const auto t = std::lower_bound(classes_.begin(), classes_.end(), truth);
    const auto p = std::lower_bound(classes_.begin(), classes_.end(), predicted);
    if (t == classes_.end() || *t != truth || p == classes_.end() || *p != predicted)
        throw StageError("eval", "label outside the confusion matrix classes");
    counts_[static_cast<std::size_t>(t - classes_.begin()) * classes_.size() +
            static_cast<std::size_t>(p - classes_.begin())]++;
    ++total_;
}

std::size_t ConfusionMatrix::support(std::size_t class_idx) const {
    std::size_t sum = 0;
    for (std::size_t j = 0; j < classes_.size(); ++j) sum += at(class_idx, j);
    return sum;
}

std::size_t ConfusionMatrix::predicted(std::size_t class_idx) const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i) sum += at(i, class_idx);
    return sum;
}

MetricsReport metrics(const ConfusionMatrix& confusion, Averaging averaging) {
    if (confusion.total() == 0) throw StageError("eval", "metrics of an empty confusion matrix");
    const std::size_t k = confusion.classes().size();

    MetricsReport report;
    report.averaging = averaging;
    std::size_t trace = 0;
    for (std::size_t i = 0; i < k; ++i) trace += confusion.at(i, i);
    report.accuracy = static_cast<double>(trace) / static_cast<double>(confusion.total());

    double sum_p = 0, sum_r = 0, sum_f1 = 0, weight_total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const int cls = confusion.classes()[i];
        ClassMetrics cm;
        cm.support = confusion.support(i);
        const std::size_t tp = confusion.at(i, i);
        const std::size_t predicted = confusion.predicted(i);
        if (predicted == 0) {
            cm.precision = 0.0;
            report.flags.push_back("class " + std::to_string(cls) +
                                   ": no predicted positives, precision set to 0");
        } else {
            cm.precision = static_cast<double>(tp) / static_cast<double>(predicted);
        }
        if (cm.support == 0) {
            report.flags.push_back("class " + std::to_string(cls) +
                                   ": zero support, excluded from averaging");
            report.per_class[cls] = cm;
            continue;
        }
        cm.recall = static_cast<double>(tp) / static_cast<double>(cm.support);
        cm.f1 = (cm.precision + cm.recall) > 0
                    ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                    : 0.0;
        report.per_class[cls] = cm;

        const double w =
            averaging == Averaging::macro ? 1.0 : static_cast<double>(cm.support);
        sum_p += w * cm.precision;
        sum_r += w * cm.recall;
        sum_f1 += w * cm.f1;
        weight_total += w;
    }
    if (weight_total > 0) {
        report.avg_precision = sum_p / weight_total;
        report.avg_recall = sum_r / weight_total;
        report.avg_f1 = sum_f1 / weight_total;
    }
    return report;
}

CvResult cross_validate(const PipelineConfig& config, const FeatureMatrix& structural,
                        std::size_t k, std::uint64_t seed) {
    const auto folds = stratified_kfold(structural.labels, k, seed);
    const std::vector<std::string> impute_cols = nan_columns(structural);

    CvResult result;
    result.folds.resize(k);
    for (std::size_t f = 0; f < k; ++f) {
        std::vector<std::size_t> train_rows;
        for (std::size_t g = 0; g < k; ++g)
            if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
        std::sort(train_rows.begin(), train_rows.end());

        const FeatureMatrix train_structural = take_rows(structural, train_rows);
        const FeatureMatrix test_structural = take_rows(structural, folds[f]);

        const std::uint64_t fold_seed = Rng::derive(seed, seed_stream::kCvFoldBase + f);
        auto [stages, train] = fit_transform_stages(config, train_structural, impute_cols);
        const FeatureMatrix test = transform_stages(stages, test_structural);

        BalancedTrain balanced = apply_balance(config.balance, std::move(train),
                                               Rng::derive(fold_seed, seed_stream::kBalance));

        std::vector<std::size_t> categorical;
        for (std::size_t c = 0; c < balanced.matrix.n_features(); ++c)
            if (!balanced.matrix.is_numeric_feature(balanced.matrix.feature_names[c]))
                categorical.push_back(c);

        auto model = make_classifier(config.model, Rng::derive(fold_seed, seed_stream::kModel),
                                     std::move(categorical));
        model->fit(balanced.matrix.values, balanced.matrix.labels, balanced.weights);

        const std::vector<int> predictions = model->predict(test.values);
        ConfusionMatrix confusion(model->classes());
        for (std::size_t i = 0; i < predictions.size(); ++i)
            confusion.add(test.labels[i], predictions[i]);
        const MetricsReport rep = metrics(confusion, config.eval.averaging);
        result.folds[f] = {rep.accuracy, rep.avg_precision, rep.avg_recall, rep.avg_f1};
    }

    for (const FoldScore& s : result.folds) {
        result.mean.accuracy += s.accuracy / static_cast<double>(k);
        result.mean.avg_precision += s.avg_precision / static_cast<double>(k);
        result.mean.avg_recall += s.avg_recall / static_cast<double>(k);
        result.mean.avg_f1 += s.avg_f1 / static_cast<double>(k);
    }
    return result;
}

std::map<std::string, double> feature_importance(const Classifier& model,
                                                 const std::vector<std::string>& feature_names) {
    const auto gains = model.importance_gains();
    if (!gains)
        throw StageError("eval", "model type '" + model.model_type() +
                                     "' has no feature importances");
    if (gains->size() != feature_names.size())
        throw StageError("eval", "feature name count does not match the model");
    double total = 0.0;
    for (double g : *gains) total += g;
    std::map<std::string, double> out;
    if (total <= 0.0) return out;  // no splits
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        if ((*gains)[i] > 0.0) out[feature_names[i]] = (*gains)[i] / total;
    return out;
}

std::string importance_csv(const std::map<std::string, double>& importances) {
    std::vector<std::pair<std::string, double>> ranked(importances.begin(), importances.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::ostringstream out;
    out << "rank,feature,fraction\n";
    for (std::size_t i = 0; i < ranked.size(); ++i)
        out << (i + 1) << "," << ranked[i].first << "," << json(ranked[i].second).dump() << "\n";
    return out.str();
}

json metrics_to_json(const MetricsReport& report, const ConfusionMatrix& confusion) {
    json per_class = json::object();
    for (const auto& [cls, cm] : report.per_class)
        per_class[std::to_string(cls)] = {{"precision", cm.precision},
                                          {"recall", cm.recall},
                                          {"f1", cm.f1},
                                          {"support", cm.support}};
    json matrix = json::array();
    const std::size_t k = confusion.classes().size();
    for (std::size_t i = 0; i < k; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < k; ++j) row.push_back(confusion.at(i, j));
        matrix.push_back(std::move(row));
    }
    return json{{"accuracy", report.accuracy},
                {"averaging", report.averaging == Averaging::macro ? "macro" : "weighted"},
                {"precision", report.avg_precision},
                {"recall", report.avg_recall},
                {"f1", report.avg_f1},
                {"per_class", std::move(per_class)},
                {"classes", confusion.classes()},
                {"confusion_matrix", std::move(matrix)},
                {"flags", report.flags}};
}

json cv_to_json(const CvResult& cv) {
    json folds = json::array();
    for (const FoldScore& s : cv.folds)
        folds.push_back({{"accuracy", s.accuracy},
                         {"precision", s.avg_precision},
                         {"recall", s.avg_recall},
                         {"f1", s.avg_f1}});
    return json{{"folds", std::move(folds)},
                {"mean",
                 {{"accuracy", cv.mean.accuracy},
                  {"precision", cv.mean.avg_precision},
                  {"recall", cv.mean.avg_recall},
                  {"f1", cv.mean.avg_f1}}}};
}

std::string report_csv(const std::string& model_name, const MetricsReport& report,
                       const CvResult* cv) {
    std::ostringstream out;
    out << "model,metric,value\n";
    auto row = [&](const char* metric, double value) {
        out << model_name << "," << metric << "," << json(value).dump() << "\n";
    };
    row("accuracy", report.accuracy);
    row("precision", report.avg_precision);
    row("recall", report.avg_recall);
    row("f1", report.avg_f1);
    if (cv) {
        row("cv_accuracy", cv->mean.accuracy);
        row("cv_precision", cv->mean.avg_precision);
        row("cv_recall", cv->mean.avg_recall);
        row("cv_f1", cv->mean.avg_f1);
        for (std::size_t f = 0; f < cv->folds.size(); ++f) {
            out << model_name << ",cv_fold" << (f + 1) << "_accuracy,"
                << json(cv->folds[f].accuracy).dump() << "\n";
        }
    }
    return out.str();
}

}  // namespace povml
