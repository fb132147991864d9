#include "povml/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/kernels.hpp"

namespace povml {

using nlohmann::json;

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Deterministic:
// fixed sweep order, fixed convergence threshold. a is destroyed; on return
// its diagonal holds the eigenvalues and v the eigenvectors (columns).
void jacobi_eigen(Matrix& a, Matrix& v) {
    const std::size_t p = a.rows;
    v = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i) v(i, i) = 1.0;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0, frob = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double sq = a(i, j) * a(i, j);
                frob += sq;
                if (j > i) off += sq;
            }
        if (off <= 1e-28 * frob) break;

        for (std::size_t i = 0; i + 1 < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j) {
                const double apq = a(i, j);
                if (apq == 0.0) continue;
                const double app = a(i, i);
                const double aqq = a(j, j);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < p; ++k) {
                    const double aik = a(k, i);
                    const double ajk = a(k, j);
                    a(k, i) = c * aik - s * ajk;
                    a(k, j) = s * aik + c * ajk;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double aik = a(i, k);
                    const double ajk = a(j, k);
                    a(i, k) = c * aik - s * ajk;
                    a(j, k) = s * aik + c * ajk;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    const double vik = v(k, i);
                    const double vjk = v(k, j);
                    v(k, i) = c * vik - s * vjk;
                    v(k, j) = s * vik + c * vjk;
                }
            }
        }
    }
}

}  // namespace

PcaModel fit_pca(const FeatureMatrix& m, std::size_t k) {
    const std::size_t n = m.n_rows();
    const std::size_t p = m.n_features();
    if (n < 2) throw StageError("reduce", "PCA needs at least 2 rows, got " + std::to_string(n));
    if (k < 1 || k > p)
        throw StageError("reduce", "component count " + std::to_string(k) +
                                       " out of range [1, " + std::to_string(p) + "]");

    PcaModel model;
    model.input_feature_names = m.feature_names;
    kernels::column_means(m.values, model.column_means);

    Matrix centered = m.values;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < p; ++c) centered(r, c) -= model.column_means[c];

    Matrix cov;
    kernels::covariance(centered, cov);
    model.total_variance = 0.0;
    for (std::size_t i = 0; i < p; ++i) model.total_variance += cov(i, i);

    Matrix v;
    jacobi_eigen(cov, v);

    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cov(a, a) > cov(b, b);
    });

    model.components = Matrix(k, p);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t e = order[i];
        // sign convention: largest-magnitude entry positive
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t c = 0; c < p; ++c) {
            const double mag = std::abs(v(c, e));
            if (mag > best) {
                best = mag;
                arg = c;
            }
        }
        const double sign = v(arg, e) < 0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < p; ++c) model.components(i, c) = sign * v(c, e);

        const double lambda = std::max(cov(e, e), 0.0);  // clip eigenvalue rounding noise
        model.explained_variance.push_back(lambda);
        model.explained_variance_ratio.push_back(
            model.total_variance > 0 ? lambda / model.total_variance : 0.0);
    }
    return model;
}

FeatureMatrix project(const FeatureMatrix& m, const PcaModel& model) {
    if (m.feature_names != model.input_feature_names)
        throw StageError("reduce", "feature names do not match the fitted PCA model");
    const std::size_t n = m.n_rows();
    const std::size_t p = m.n_features();
    const std::size_t k = model.k();

    FeatureMatrix out;
    for (std::size_t i = 0; i < k; ++i) out.feature_names.push_back("pc" + std::to_string(i + 1));
    out.numeric_feature_names = out.feature_names;
    out.labels = m.labels;
    out.values = Matrix(n, k);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            double dot = 0.0;
            for (std::size_t c = 0; c < p; ++c)
                dot += (m.values(r, c) - model.column_means[c]) * model.components(i, c);
            out.values(r, i) = dot;
        }
    }
    return out;
}

std::string explained_variance_csv(const PcaModel& model) {
    std::ostringstream out;
    out << "component,explained_variance_ratio,cumulative_ratio\n";
    double cum = 0.0;
    for (std::size_t i = 0; i < model.k(); ++i) {
        cum += model.explained_variance_ratio[i];
        out << (i + 1) << "," << json(model.explained_variance_ratio[i]).dump() << ","
            << json(cum).dump() << "\n";
    }
    return out.str();
}

PcaModel PcaModel::from_json(const json& j) {
    PcaModel m;
    m.input_feature_names = j.at("input_feature_names").get<std::vector<std::string>>();
    m.column_means = j.at("column_means").get<std::vector<double>>();
    m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    m.explained_variance_ratio = j.at("explained_variance_ratio").get<std::vector<double>>();
    m.total_variance = j.at("total_variance").get<double>();
    const auto rows = j.at("components").get<std::vector<std::vector<double>>>();
    const std::size_t k = rows.size();
    const std::size_t p = m.column_means.size();
    m.components = Matrix(k, p);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < p; ++c) m.components(i, c) = rows[i][c];
    return m;
}

json PcaModel::to_json() const {
    json rows = json::array();
    for (std::size_t i = 0; i < components.rows; ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < components.cols; ++c) row.push_back(components(i, c));
        rows.push_back(std::move(row));
    }
    return json{{"input_feature_names", input_feature_names},
                {"column_means", column_means},
                {"components", std::move(rows)},
                {"explained_variance", explained_variance},
                {"explained_variance_ratio", explained_variance_ratio},
                {"total_variance", total_variance}};
}

}  // namespace povml
