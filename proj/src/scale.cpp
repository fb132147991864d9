#include "povml/scale.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"
#include "povml/kernels.hpp"

namespace povml {

using nlohmann::json;

ScalerState fit_scaler(const FeatureMatrix& m, const std::set<std::string>& minmax_columns) {
    for (const auto& name : minmax_columns) {
        if (m.feature_index(name) == FeatureMatrix::npos)
            throw StageError("scale", "min-max column '" + name + "' is not a feature");
        if (!m.is_numeric_feature(name))
            throw StageError("scale", "min-max column '" + name + "' is not numeric");
    }

    ScalerState state;
    state.feature_names = m.feature_names;
    const std::size_t n = m.n_rows();
    if (n == 0) throw StageError("scale", "cannot fit a scaler on an empty matrix");

    for (const auto& name : m.numeric_feature_names) {
        const std::size_t j = m.feature_index(name);
        ScalerState::ColumnScale cs;
        cs.name = name;
        if (minmax_columns.count(name)) {
            cs.kind = ScaleKind::minmax;
            double lo = m.values(0, j), hi = m.values(0, j);
            for (std::size_t r = 1; r < n; ++r) {
                lo = std::min(lo, m.values(r, j));
                hi = std::max(hi, m.values(r, j));
            }
            cs.a = lo;
            cs.b = hi;
        } else {
            cs.kind = ScaleKind::zscore;
            double sum = 0.0;
            for (std::size_t r = 0; r < n; ++r) sum += m.values(r, j);
            const double mean = sum / static_cast<double>(n);
            double sq = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double d = m.values(r, j) - mean;
                sq += d * d;
            }
            cs.a = mean;
            cs.b = std::sqrt(sq / static_cast<double>(n));  // population sigma
        }
        state.columns.push_back(std::move(cs));
    }
    return state;
}

FeatureMatrix transform(const FeatureMatrix& m, const ScalerState& state) {
    if (m.feature_names != state.feature_names)
        throw StageError("scale", "feature names do not match the fitted scaler");

    // Express both rules as out = (x - shift) * scale; untouched columns get
    // shift 0, scale 1. Degenerate columns force the output to 0.
    std::vector<double> shift(m.n_features(), 0.0);
    std::vector<double> scale(m.n_features(), 1.0);
    for (const auto& cs : state.columns) {
        const std::size_t j = m.feature_index(cs.name);
        if (cs.kind == ScaleKind::minmax) {
            const double range = cs.b - cs.a;
            shift[j] = range == 0.0 ? 0.0 : cs.a;
            scale[j] = range == 0.0 ? 0.0 : 1.0 / range;
        } else {
            shift[j] = cs.b == 0.0 ? 0.0 : cs.a;
            scale[j] = cs.b == 0.0 ? 0.0 : 1.0 / cs.b;
        }
    }

    FeatureMatrix out;
    out.feature_names = m.feature_names;
    out.numeric_feature_names = m.numeric_feature_names;
    out.labels = m.labels;
    kernels::affine_columns(m.values, shift, scale, out.values);
    return out;
}

ScalerState ScalerState::from_json(const json& j) {
    ScalerState s;
    s.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& e : j.at("columns")) {
        ColumnScale cs;
        cs.name = e.at("name").get<std::string>();
        cs.kind = e.at("kind").get<std::string>() == "minmax" ? ScaleKind::minmax
                                                              : ScaleKind::zscore;
        cs.a = e.at("a").get<double>();
        cs.b = e.at("b").get<double>();
        s.columns.push_back(std::move(cs));
    }
    return s;
}

json ScalerState::to_json() const {
    json cols = json::array();
    for (const auto& cs : columns)
        cols.push_back({{"name", cs.name},
                        {"kind", cs.kind == ScaleKind::minmax ? "minmax" : "zscore"},
                        {"a", cs.a},
                        {"b", cs.b}});
    return json{{"feature_names", feature_names}, {"columns", std::move(cols)}};
}

}  // namespace povml
