// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
//
// Criteria 1-5 need the published household survey file; pass its path as
// argv[1] or in POVML_DATASET. Without it they are reported as SKIP (the
// file is not redistributable). Criteria 6-7 always run.
//
// Exit code: 0 when no criterion FAILed, 1 otherwise.
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include <nlohmann/json.hpp>

#include "fixture.hpp"
#include "povml/balance.hpp"
#include "povml/eval.hpp"
#include "povml/forest.hpp"
#include "povml/gbt.hpp"
#include "povml/knn.hpp"
#include "povml/naive_bayes.hpp"
#include "povml/pca.hpp"
#include "povml/pipeline.hpp"
#include "povml/rng.hpp"
#include "povml/scale.hpp"
#include "povml/tree.hpp"

using namespace povml;

namespace {

double now() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

int g_failures = 0;

void pass(int criterion, const std::string& detail) {
    std::printf("PASS criterion %d: %s\n", criterion, detail.c_str());
}

void fail(int criterion, const std::string& detail) {
    std::printf("FAIL criterion %d: %s\n", criterion, detail.c_str());
    ++g_failures;
}

void skip(int criterion, const std::string& detail) {
    std::printf("SKIP criterion %d: %s\n", criterion, detail.c_str());
}

void check(bool ok, const char* what, std::string& errors) {
    if (!ok) errors += std::string(errors.empty() ? "" : "; ") + what;
}

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof buffer, format, args);
    va_end(args);
    return buffer;
}

// ---------------------------------------------------------------- criterion 1
void criterion1_profiling(const std::string& dataset) {
    const double t0 = now();
    const RawTable table = load_csv(dataset, Schema::canonical());
    const DatasetProfile prof = profile(table);
    const double elapsed = now() - t0;

    std::string errors;
    check(prof.n_rows == 9557, "n_rows != 9557", errors);
    check(prof.n_cols == 143, "n_cols != 143", errors);
    const std::map<std::string, std::size_t> expected{
        {"v2a1", 6860}, {"v18q1", 7342}, {"dependency", 2192}, {"Edjefe", 123},
        {"Edjefa", 69}, {"meaneduc", 5}, {"SQBmeaned", 5}};
    for (const auto& [name, count] : expected)
        check(prof.missing_by_column.at(name) == count,
              ("missing count mismatch for " + name).c_str(), errors);
    for (const auto& var : Schema::canonical().variables())
        if (!expected.count(var.name) && var.role != Role::target)
            check(prof.missing_by_column.at(var.name) == 0,
                  ("unexpected missing cells in " + var.name).c_str(), errors);

    const double class4 = 100.0 * double(prof.class_counts.count(4) ? prof.class_counts.at(4) : 0) /
                          double(prof.n_rows);
    const double urban = 100.0 * double(prof.urban_count) / double(prof.n_rows);
    check(std::abs(class4 - 62.7) <= 0.1, "class-4 share outside 62.7 +- 0.1", errors);
    check(std::abs(urban - 71.4) <= 0.1, "urban share outside 71.4 +- 0.1", errors);
    check(elapsed < 5.0, "profiling slower than 5 s", errors);

    if (errors.empty())
        pass(1, fmt("profiling matches the published counts (%.2f s)", elapsed));
    else
        fail(1, errors);
}

// ---------------------------------------------------------------- criterion 2
void criterion2_wrangling(const std::string& dataset) {
    const double t0 = now();
    const RawTable table = load_csv(dataset, Schema::canonical());
    const WrangleResult result = apply_plan(table, build_default_plan());
    const double elapsed = now() - t0;

    std::string errors;
    check(result.matrix.n_features() == 125, "feature count != 125", errors);
    check(result.matrix.n_rows() == 9473, "row count != 9473", errors);
    bool any_nan = false;
    for (double v : result.matrix.values.data) any_nan = any_nan || std::isnan(v);
    check(!any_nan, "missing cells survived wrangling", errors);

    const std::set<std::string> numeric(result.matrix.numeric_feature_names.begin(),
                                        result.matrix.numeric_feature_names.end());
    const std::set<std::string> expected_numeric{
        "Rooms", "r4h1", "r4h2", "r4h3", "r4m1", "r4m2", "r4m3", "r4t1", "r4t2", "r4t3",
        "escolari", "rez_esc", "dependency", "Edjefe", "Edjefa", "meaneduc", "overcrowding"};
    check(numeric == expected_numeric, "numeric feature set differs from the published 17",
          errors);
    check(elapsed < 10.0, "wrangling slower than 10 s", errors);

    if (errors.empty())
        pass(2, fmt("125 features x 9473 rows, 17 numeric, no missing cells (%.2f s)", elapsed));
    else
        fail(2, errors);
}

// ------------------------------------------------------------ criteria 3/4/5
struct SweepResult {
    // [config 0=no-PCA, 1=PCA-60] mean over seeds, in percent
    double test_accuracy[2] = {0, 0};
    double test_f1[2] = {0, 0};
    double cv_accuracy[2] = {0, 0};
    int meaneduc_top3_runs = 0;  // no-PCA runs with meaneduc ranked top 3
    int runs_per_config = 0;
};

SweepResult run_sweep(const std::string& dataset, ModelKind kind,
                      const std::vector<std::uint64_t>& seeds) {
    SweepResult result;
    result.runs_per_config = static_cast<int>(seeds.size());
    for (int variant = 0; variant < 2; ++variant) {
        for (std::uint64_t seed : seeds) {
            PipelineConfig config;
            config.dataset = dataset;
            config.seed = seed;
            config.model.kind = kind;
            config.pca.enabled = variant == 1;
            config.pca.k = 60;
            const EvaluateResult eval = run_evaluate(config, true);
            result.test_accuracy[variant] +=
                100.0 * eval.report_json["test"]["accuracy"].get<double>() / seeds.size();
            result.test_f1[variant] +=
                100.0 * eval.report_json["test"]["f1"].get<double>() / seeds.size();
            result.cv_accuracy[variant] +=
                100.0 * eval.report_json["cv"]["mean"]["accuracy"].get<double>() / seeds.size();

            if (variant == 0 && kind == ModelKind::gbt &&
                eval.report_json.contains("importances")) {
                std::vector<std::pair<std::string, double>> ranked;
                for (auto it = eval.report_json["importances"].begin();
                     it != eval.report_json["importances"].end(); ++it)
                    ranked.emplace_back(it.key(), it.value().get<double>());
                std::sort(ranked.begin(), ranked.end(),
                          [](const auto& a, const auto& b) { return a.second > b.second; });
                for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i)
                    if (ranked[i].first == "meaneduc") ++result.meaneduc_top3_runs;
            }
        }
    }
    return result;
}

void criteria345_reproduction(const std::string& dataset) {
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    const double t0 = now();
    const SweepResult rf = run_sweep(dataset, ModelKind::forest, seeds);
    const SweepResult gbt = run_sweep(dataset, ModelKind::gbt, seeds);
    const double elapsed = now() - t0;

    auto in_band = [](double value, double center, double tolerance) {
        return std::abs(value - center) <= tolerance;
    };

    // criterion 3: published test scores, at least one of the two configs
    bool rf_ok = false, gbt_ok = false;
    for (int v = 0; v < 2; ++v) {
        rf_ok = rf_ok || (in_band(rf.test_accuracy[v], 78.1, 4.0) &&
                          in_band(rf.test_f1[v], 64.9, 6.0));
        gbt_ok = gbt_ok || (in_band(gbt.test_accuracy[v], 79.6, 4.0) &&
                            in_band(gbt.test_f1[v], 68.4, 6.0));
    }
    const std::string detail = fmt(
        "RF acc %.1f/%.1f F1 %.1f/%.1f, GBT acc %.1f/%.1f F1 %.1f/%.1f (no-PCA/PCA-60, "
        "mean of 5 seeds, %.0f s)",
        rf.test_accuracy[0], rf.test_accuracy[1], rf.test_f1[0], rf.test_f1[1],
        gbt.test_accuracy[0], gbt.test_accuracy[1], gbt.test_f1[0], gbt.test_f1[1], elapsed);
    std::string errors;
    check(rf_ok, "RF outside 78.1+-4 acc / 64.9+-6 F1 in both configs", errors);
    check(gbt_ok, "GBT outside 79.6+-4 acc / 68.4+-6 F1 in both configs", errors);
    check(elapsed < 900.0, "sweep slower than 15 min", errors);
    if (errors.empty())
        pass(3, detail);
    else
        fail(3, errors + " [" + detail + "]");

    // criterion 4: cross-validation means from the same runs
    bool rf_cv = false, gbt_cv = false;
    for (int v = 0; v < 2; ++v) {
        rf_cv = rf_cv || in_band(rf.cv_accuracy[v], 76.0, 4.0);
        gbt_cv = gbt_cv || in_band(gbt.cv_accuracy[v], 77.6, 4.0);
    }
    const std::string cv_detail =
        fmt("RF cv %.1f/%.1f, GBT cv %.1f/%.1f", rf.cv_accuracy[0], rf.cv_accuracy[1],
            gbt.cv_accuracy[0], gbt.cv_accuracy[1]);
    if (rf_cv && gbt_cv)
        pass(4, cv_detail);
    else
        fail(4, "CV accuracy outside the published bands [" + cv_detail + "]");

    // criterion 5: meaneduc in the top 3 of the no-PCA GBT importances
    if (gbt.meaneduc_top3_runs * 2 > gbt.runs_per_config)
        pass(5, fmt("meaneduc ranked top-3 in %d of %d no-PCA GBT runs",
                    gbt.meaneduc_top3_runs, gbt.runs_per_config));
    else
        fail(5, fmt("meaneduc ranked top-3 in only %d of %d no-PCA GBT runs",
                    gbt.meaneduc_top3_runs, gbt.runs_per_config));
}

// ---------------------------------------------------------------- criterion 6
Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

FeatureMatrix numeric_matrix(const std::vector<std::vector<double>>& rows,
                             std::vector<int> labels) {
    FeatureMatrix m;
    const std::size_t p = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < p; ++c) m.feature_names.push_back("f" + std::to_string(c));
    m.numeric_feature_names = m.feature_names;
    m.values = from_rows(rows);
    m.labels = std::move(labels);
    return m;
}

void property_scaling(std::string& errors) {
    Rng rng(101);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<std::vector<double>> rows(20 + rng.below(30), std::vector<double>(2));
        for (auto& row : rows) {
            row[0] = rng.unit() * 40 - 20;
            row[1] = rng.unit() * 7;
        }
        const FeatureMatrix m = numeric_matrix(rows, std::vector<int>(rows.size(), 1));
        const ScalerState state = fit_scaler(m, {"f0"});
        const FeatureMatrix t = transform(m, state);
        double mean = 0;
        for (std::size_t r = 0; r < t.n_rows(); ++r) {
            check(t.values(r, 0) >= -1e-12 && t.values(r, 0) <= 1 + 1e-12,
                  "minmax outside [0,1]", errors);
            mean += t.values(r, 1);
        }
        mean /= double(t.n_rows());
        double var = 0;
        for (std::size_t r = 0; r < t.n_rows(); ++r)
            var += (t.values(r, 1) - mean) * (t.values(r, 1) - mean);
        var /= double(t.n_rows());
        check(std::abs(mean) < 1e-9, "zscore mean not ~0", errors);
        check(std::abs(var - 1.0) < 1e-9, "zscore variance not ~1", errors);
    }
}

void property_pca(std::string& errors) {
    Rng rng(103);
    std::vector<std::vector<double>> rows(40, std::vector<double>(6));
    for (auto& row : rows)
        for (auto& v : row) v = rng.unit() * 3 - 1.5;
    const FeatureMatrix m = numeric_matrix(rows, std::vector<int>(rows.size(), 1));
    const PcaModel model = fit_pca(m, 6);

    double ratio_sum = 0;
    for (double r : model.explained_variance_ratio) ratio_sum += r;
    check(std::abs(ratio_sum - 1.0) < 1e-9, "PCA ratios do not sum to 1", errors);

    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            double dot = 0;
            for (std::size_t c = 0; c < 6; ++c)
                dot += model.components(i, c) * model.components(j, c);
            check(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-8, "PCA components not orthonormal",
                  errors);
        }

    const FeatureMatrix projected = project(m, model);
    for (std::size_t r = 0; r < m.n_rows(); ++r)
        for (std::size_t c = 0; c < 6; ++c) {
            double back = model.column_means[c];
            for (std::size_t i = 0; i < 6; ++i)
                back += projected.values(r, i) * model.components(i, c);
            check(std::abs(back - m.values(r, c)) <= 1e-6, "full-rank reconstruction off",
                  errors);
        }
}

void property_best_split_oracle(std::string& errors) {
    Rng rng(107);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        const std::size_t p = 1 + rng.below(3);
        std::vector<std::vector<double>> rows(n, std::vector<double>(p));
        std::vector<int> labels(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (auto& v : rows[r]) v = double(rng.below(2));
            labels[r] = int(rng.below(2));
        }
        const Matrix x = from_rows(rows);
        std::vector<std::size_t> features(p);
        for (std::size_t c = 0; c < p; ++c) features[c] = c;
        const auto split = best_split(x, labels, {}, features);

        // exhaustive oracle
        bool found = false;
        std::size_t bf = 0;
        double bt = 0, bd = 0;
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        auto gini_of = [&](const std::vector<std::size_t>& rows_in) {
            std::map<int, double> counts;
            for (std::size_t r : rows_in) counts[labels[r]] += 1.0;
            double sq = 0;
            for (const auto& [cls, c] : counts)
                sq += (c / rows_in.size()) * (c / rows_in.size());
            return 1.0 - sq;
        };
        const double parent = gini_of(all);
        for (std::size_t f = 0; f < p; ++f) {
            std::set<double> distinct;
            for (std::size_t r : all) distinct.insert(x(r, f));
            std::vector<double> values(distinct.begin(), distinct.end());
            for (std::size_t i = 0; i + 1 < values.size(); ++i) {
                const double threshold = (values[i] + values[i + 1]) / 2;
                std::vector<std::size_t> left, right;
                for (std::size_t r : all) (x(r, f) <= threshold ? left : right).push_back(r);
                const double decrease =
                    parent - (left.size() * gini_of(left) + right.size() * gini_of(right)) /
                                 double(n);
                if (decrease <= 0) continue;
                if (!found || decrease > bd + 1e-12) {
                    found = true;
                    bf = f;
                    bt = threshold;
                    bd = decrease;
                }
            }
        }
        check(split.has_value() == found, "best_split disagrees with brute force on existence",
              errors);
        if (split && found) {
            check(split->feature == bf && std::abs(split->threshold - bt) < 1e-12,
                  "best_split disagrees with brute force on the chosen split", errors);
            check(std::abs(split->decrease - bd) < 1e-9,
                  "best_split disagrees with brute force on the decrease", errors);
        }
    }
}

void property_trees(std::string& errors) {
    // consistent data trains to 100%
    Rng rng(109);
    std::vector<std::vector<double>> rows(40, std::vector<double>(3));
    std::vector<int> labels(40);
    std::map<std::vector<double>, int> seen;
    for (std::size_t r = 0; r < 40; ++r) {
        for (auto& v : rows[r]) v = double(rng.below(5));
        auto it = seen.find(rows[r]);
        labels[r] = it == seen.end() ? 1 + int(rng.below(3)) : it->second;
        seen.emplace(rows[r], labels[r]);
    }
    const Matrix x = from_rows(rows);
    DecisionTreeClassifier tree;
    tree.fit(x, labels);
    check(tree.predict(x) == labels, "tree below 100% on consistent data", errors);

    // degenerate forest == tree
    ForestParams fp;
    fp.n_trees = 1;
    fp.bootstrap = false;
    fp.tree.features_per_split = x.cols;
    RandomForestClassifier forest(fp);
    forest.fit(x, labels);
    check(forest.predict_proba(x).data == tree.predict_proba(x).data,
          "single-tree forest differs from the tree", errors);
}

void property_gbt_loss(std::string& errors) {
    Rng rng(113);
    std::vector<std::vector<double>> rows(80, std::vector<double>(4));
    std::vector<int> labels(80);
    for (std::size_t r = 0; r < 80; ++r) {
        for (auto& v : rows[r]) v = rng.unit();
        labels[r] = rows[r][0] > 0.5 ? 1 : (rows[r][1] > 0.5 ? 2 : 3);
    }
    GbtParams params;
    params.iterations = 25;
    params.learning_rate = 0.1;
    GradientBoostedTreesClassifier model(params);
    model.fit(from_rows(rows), labels);
    for (std::size_t i = 1; i < model.training_loss().size(); ++i)
        check(model.training_loss()[i] <= model.training_loss()[i - 1] + 1e-12,
              "GBT training loss increased", errors);
}

void property_nb_knn(std::string& errors) {
    Rng rng(127);
    std::vector<std::vector<double>> rows(30, std::vector<double>(2));
    std::vector<int> labels(30);
    for (std::size_t r = 0; r < 30; ++r) {
        rows[r][0] = double(rng.below(2));
        rows[r][1] = double(r);  // all distinct
        labels[r] = 1 + int(rng.below(3));
    }
    const Matrix x = from_rows(rows);
    NaiveBayesClassifier nb(NaiveBayesParams{}, {0});
    nb.fit(x, labels);
    const Matrix proba = nb.predict_proba(x);
    for (std::size_t r = 0; r < proba.rows; ++r) {
        double sum = 0;
        for (std::size_t c = 0; c < proba.cols; ++c) {
            check(proba(r, c) > 0.0, "NB posterior hit zero despite smoothing", errors);
            sum += proba(r, c);
        }
        check(std::abs(sum - 1.0) < 1e-9, "NB posterior does not sum to 1", errors);
    }

    KnnParams kp;
    kp.k = 1;
    KnnClassifier knn(kp);
    knn.fit(x, labels);
    check(knn.predict(x) == labels, "KNN k=1 not self-consistent", errors);
}

void property_folds_balance_metrics(std::string& errors) {
    // stratified folds: within-1 per class
    Rng rng(131);
    std::vector<int> labels(90);
    for (int& l : labels) l = 1 + int(rng.below(3));
    const auto folds = stratified_kfold(labels, 5, 3);
    std::map<int, std::size_t> support;
    for (int l : labels) support[l]++;
    for (const auto& fold : folds)
        for (const auto& [cls, n] : support) {
            std::size_t in_fold = 0;
            for (std::size_t r : fold) in_fold += labels[r] == cls;
            check(std::llabs(static_cast<long long>(in_fold) - static_cast<long long>(n / 5)) <= 1,
                  "fold class counts beyond within-1", errors);
        }

    // balancing equalizes counts; SMOTE interior
    std::vector<std::vector<double>> rows;
    std::vector<int> blabels;
    for (int i = 0; i < 24; ++i) {
        rows.push_back({rng.unit() * 2, rng.unit()});
        blabels.push_back(i < 18 ? 1 : 2);
    }
    const FeatureMatrix m = numeric_matrix(rows, blabels);
    auto counts = [](const std::vector<int>& ls) {
        std::map<int, std::size_t> out;
        for (int l : ls) out[l]++;
        return out;
    };
    const auto under = counts(undersample(m, 5).labels);
    check(under.at(1) == under.at(2), "undersample did not equalize", errors);
    const auto over = counts(oversample(m, 5).labels);
    check(over.at(1) == over.at(2), "oversample did not equalize", errors);
    const SmoteResult sm = smote(m, 3, 5);
    check(counts(sm.matrix.labels).at(1) == counts(sm.matrix.labels).at(2),
          "smote did not equalize", errors);
    double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        if (m.labels[r] != 2) continue;
        for (int c = 0; c < 2; ++c) {
            lo[c] = std::min(lo[c], m.values(r, c));
            hi[c] = std::max(hi[c], m.values(r, c));
        }
    }
    for (std::size_t r = 0; r < sm.matrix.n_rows(); ++r) {
        if (sm.matrix.labels[r] != 2) continue;
        for (int c = 0; c < 2; ++c)
            check(sm.matrix.values(r, c) >= lo[c] - 1e-12 &&
                      sm.matrix.values(r, c) <= hi[c] + 1e-12,
                  "smote point outside the class hull", errors);
    }

    // hand-computed confusion metrics and micro-recall == accuracy
    ConfusionMatrix cm({1, 2});
    cm.add(1, 1);
    cm.add(1, 1);
    cm.add(2, 1);
    cm.add(1, 2);
    for (int i = 0; i < 6; ++i) cm.add(2, 2);
    const MetricsReport rep = metrics(cm);
    check(std::abs(rep.per_class.at(1).precision - 2.0 / 3.0) < 1e-12, "precision mismatch",
          errors);
    check(std::abs(rep.per_class.at(1).recall - 2.0 / 3.0) < 1e-12, "recall mismatch", errors);
    check(std::abs(rep.per_class.at(1).f1 - 2.0 / 3.0) < 1e-12, "F1 mismatch", errors);

    for (int trial = 0; trial < 10; ++trial) {
        ConfusionMatrix random_cm({1, 2, 3});
        bool any = false;
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
                const std::size_t count = rng.below(6);
                any = any || count;
                for (std::size_t t = 0; t < count; ++t) random_cm.add(i, j);
            }
        if (!any) continue;
        double tp = 0, total_support = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            tp += double(random_cm.at(i, i));
            total_support += double(random_cm.support(i));
        }
        const MetricsReport r2 = metrics(random_cm);
        check(std::abs(tp / total_support - r2.accuracy) < 1e-12,
              "micro recall != accuracy", errors);
    }
}

void criterion6_properties() {
    const double t0 = now();
    std::string errors;
    property_scaling(errors);
    property_pca(errors);
    property_best_split_oracle(errors);
    property_trees(errors);
    property_gbt_loss(errors);
    property_nb_knn(errors);
    property_folds_balance_metrics(errors);
    const double elapsed = now() - t0;
    if (elapsed >= 60.0)
        errors += std::string(errors.empty() ? "" : "; ") + "property suite exceeded 60 s";
    if (errors.empty())
        pass(6, fmt("property suite green (%.1f s)", elapsed));
    else
        fail(6, errors);
}

// ---------------------------------------------------------------- criterion 7
void criterion7_determinism() {
    testing::write_fixture("acceptance_fixture.csv", testing::small_fixture_spec());
    std::string errors;
    for (ModelKind kind : {ModelKind::tree, ModelKind::forest, ModelKind::gbt, ModelKind::nb,
                           ModelKind::knn}) {
        PipelineConfig config;
        config.dataset = "acceptance_fixture.csv";
        config.seed = 99;
        config.model.kind = kind;
        config.model.n_trees = 15;
        config.model.iterations = 10;
        config.eval.cv_folds = 2;

        const TrainResult t1 = run_train(config);
        const TrainResult t2 = run_train(config);
        if (t1.model_json.dump() != t2.model_json.dump())
            errors += fmt("%s model files differ; ", model_kind_name(kind));
        const EvaluateResult e1 = run_evaluate(config, true);
        const EvaluateResult e2 = run_evaluate(config, true);
        if (e1.report_json.dump() != e2.report_json.dump() || e1.report_csv != e2.report_csv)
            errors += fmt("%s reports differ; ", model_kind_name(kind));
    }
    if (errors.empty())
        pass(7, "identical config+seed reproduce byte-identical models and reports");
    else
        fail(7, errors);
}

}  // namespace

int main(int argc, char** argv) {
    std::string dataset;
    if (argc > 1) dataset = argv[1];
    if (dataset.empty())
        if (const char* env = std::getenv("POVML_DATASET")) dataset = env;

    if (dataset.empty()) {
        const char* reason =
            "canonical dataset not provided (pass a path or set POVML_DATASET)";
        skip(1, reason);
        skip(2, reason);
        skip(3, reason);
        skip(4, reason);
        skip(5, reason);
    } else {
        try {
            criterion1_profiling(dataset);
            criterion2_wrangling(dataset);
            criteria345_reproduction(dataset);
        } catch (const std::exception& e) {
            fail(0, std::string("dataset-dependent criteria aborted: ") + e.what());
        }
    }

    criterion6_properties();
    criterion7_determinism();

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all executed criteria passed\n");
    return 0;
}
