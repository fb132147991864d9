#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace povml {

// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    double* row_ptr(std::size_t r) { return data.data() + r * cols; }
    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }
};

// Numeric feature table paired with integer class labels. Produced by the
// wrangling stage and passed through scaling, PCA and balancing unchanged in
// shape semantics: values is rows x feature_names.size().
//
// numeric_feature_names flags the discrete/continuous subset; everything else
// is a 0/1 dummy column.
struct FeatureMatrix {
    std::vector<std::string> feature_names;
    Matrix values;
    std::vector<int> labels;
    std::vector<std::string> numeric_feature_names;

    std::size_t n_rows() const { return values.rows; }
    std::size_t n_features() const { return values.cols; }

    // Index of a feature name, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t feature_index(const std::string& name) const {
        for (std::size_t i = 0; i < feature_names.size(); ++i)
            if (feature_names[i] == name) return i;
        return npos;
    }

    bool is_numeric_feature(const std::string& name) const {
        for (const auto& n : numeric_feature_names)
            if (n == name) return true;
        return false;
    }
};

// Row subset, preserving feature metadata. Used to materialize CV folds.
FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<std::size_t>& rows);

}  // namespace povml
