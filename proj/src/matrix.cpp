#include "povml/matrix.hpp"

namespace povml {

FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<std::size_t>& rows) {
    FeatureMatrix out;
    out.feature_names = m.feature_names;
    out.numeric_feature_names = m.numeric_feature_names;
    out.values = Matrix(rows.size(), m.values.cols);
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        for (std::size_t c = 0; c < m.values.cols; ++c) out.values(i, c) = m.values(r, c);
        out.labels.push_back(m.labels.empty() ? 0 : m.labels[r]);
    }
    if (m.labels.empty()) out.labels.clear();
    return out;
}

}  // namespace povml
