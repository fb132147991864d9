#include "povml/balance.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/kernels.hpp"
#include "povml/rng.hpp"

namespace povml {

const char* balance_method_name(BalanceMethod m) {
    switch (m) {
        case BalanceMethod::none: return "none";
        case BalanceMethod::undersample: return "undersample";
        case BalanceMethod::oversample: return "oversample";
        case BalanceMethod::smote: return "smote";
        case BalanceMethod::class_weights: return "class_weights";
    }
    return "?";
}

std::optional<BalanceMethod> balance_method_from_name(const std::string& s) {
    if (s == "none") return BalanceMethod::none;
    if (s == "undersample") return BalanceMethod::undersample;
    if (s == "oversample") return BalanceMethod::oversample;
    if (s == "smote") return BalanceMethod::smote;
    if (s == "class_weights") return BalanceMethod::class_weights;
    return std::nullopt;
}

namespace {

// Class label -> row indices, keyed ascending for deterministic iteration.
std::map<int, std::vector<std::size_t>> rows_by_class(const std::vector<int>& labels) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    return by_class;
}

}  // namespace

FeatureMatrix undersample(const FeatureMatrix& m, std::uint64_t seed) {
    auto by_class = rows_by_class(m.labels);
    if (by_class.size() < 2)
        throw StageError("balance", "undersample needs at least 2 classes");
    std::size_t minority = m.n_rows();
    for (const auto& [cls, rows] : by_class) minority = std::min(minority, rows.size());

    Rng rng(seed);
    std::vector<std::size_t> keep;
    for (auto& [cls, rows] : by_class) {
        rng.shuffle(rows);
        keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<long>(minority));
    }
    std::sort(keep.begin(), keep.end());  // preserve original row order
    return take_rows(m, keep);
}

FeatureMatrix oversample(const FeatureMatrix& m, std::uint64_t seed) {
    auto by_class = rows_by_class(m.labels);
    if (by_class.size() < 2)
        throw StageError("balance", "oversample needs at least 2 classes");
    std::size_t majority = 0;
    for (const auto& [cls, rows] : by_class) majority = std::max(majority, rows.size());

    Rng rng(seed);
    std::vector<std::size_t> rows(m.n_rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    for (const auto& [cls, members] : by_class)
        for (std::size_t i = members.size(); i < majority; ++i)
            rows.push_back(members[rng.below(members.size())]);
    return take_rows(m, rows);
}

SmoteResult smote(const FeatureMatrix& m, std::size_t k, std::uint64_t seed) {
    if (k < 1) throw StageError("balance", "smote neighbor count must be >= 1");
    auto by_class = rows_by_class(m.labels);
    if (by_class.size() < 2) throw StageError("balance", "smote needs at least 2 classes");
    std::size_t majority = 0;
    for (const auto& [cls, rows] : by_class) majority = std::max(majority, rows.size());

    SmoteResult result;
    FeatureMatrix& out = result.matrix;
    out.feature_names = m.feature_names;
    out.numeric_feature_names = m.numeric_feature_names;

    std::size_t total = 0;
    for (const auto& [cls, rows] : by_class) total += majority;
    out.values = Matrix(total, m.n_features());
    out.labels.reserve(total);

    std::size_t w = 0;
    auto copy_row = [&](std::size_t src, int label) {
        for (std::size_t c = 0; c < m.n_features(); ++c) out.values(w, c) = m.values(src, c);
        out.labels.push_back(label);
        ++w;
    };

    Rng rng(seed);
    for (const auto& [cls, members] : by_class) {
        for (std::size_t src : members) copy_row(src, cls);
        const std::size_t need = majority - members.size();
        if (need == 0) continue;

        if (members.size() < 2) {
            result.notes.push_back("smote: class " + std::to_string(cls) +
                                   " has a single member, duplicating instead");
            for (std::size_t i = 0; i < need; ++i) copy_row(members[0], cls);
            continue;
        }

        // k nearest same-class neighbors of every member (self excluded)
        Matrix class_rows(members.size(), m.n_features());
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t c = 0; c < m.n_features(); ++c)
                class_rows(i, c) = m.values(members[i], c);
        const std::size_t kk = std::min(k, members.size() - 1);
        std::vector<kernels::NeighborList> neighbors;
        kernels::knn_search(class_rows, class_rows, kk + 1, neighbors);

        for (std::size_t i = 0; i < need; ++i) {
            const std::size_t base = rng.below(members.size());
            const kernels::NeighborList& nl = neighbors[base];
            // skip self (distance 0 at its own index; ties keep it first among equals)
            std::vector<std::size_t> candidates;
            for (const auto& [idx, dist] : nl)
                if (idx != base) candidates.push_back(idx);
            const std::size_t nn = candidates[rng.below(std::min(kk, candidates.size()))];
            const double lambda = rng.unit();
            for (std::size_t c = 0; c < m.n_features(); ++c) {
                const double a = class_rows(base, c);
                const double b = class_rows(nn, c);
                out.values(w, c) = a + lambda * (b - a);
            }
            out.labels.push_back(cls);
            ++w;
        }
    }
    return result;
}

std::map<int, double> class_weights(const std::vector<int>& labels) {
    if (labels.empty()) throw StageError("balance", "class_weights on empty labels");
    auto by_class = rows_by_class(labels);
    const double n = static_cast<double>(labels.size());
    const double k = static_cast<double>(by_class.size());
    std::map<int, double> weights;
    for (const auto& [cls, rows] : by_class)
        weights[cls] = n / (k * static_cast<double>(rows.size()));
    return weights;
}

}  // namespace povml
