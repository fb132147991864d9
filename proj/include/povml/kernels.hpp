#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "povml/matrix.hpp"

namespace povml::kernels {

// Data-parallel inner loops shared by the pipeline stages. Each kernel has a
// serial reference implementation and an OpenMP version; the parallel form
// assigns whole output slots to iterations so results are bit-identical to
// the serial one regardless of thread count. tools/bench compares the two.

// Per-column means of an n x p matrix.
void column_means_serial(const Matrix& m, std::vector<double>& out);
void column_means(const Matrix& m, std::vector<double>& out);

// Covariance of a column-centered matrix, divide-by-(n-1). out is p x p.
// Requires n >= 2.
void covariance_serial(const Matrix& centered, Matrix& out);
void covariance(const Matrix& centered, Matrix& out);

// For each query row, the k nearest training rows by Euclidean distance,
// ordered by (distance, training index). Returns (index, squared distance).
using NeighborList = std::vector<std::pair<std::size_t, double>>;
void knn_search_serial(const Matrix& train, const Matrix& queries, std::size_t k,
                       std::vector<NeighborList>& out);
void knn_search(const Matrix& train, const Matrix& queries, std::size_t k,
                std::vector<NeighborList>& out);

// Row-wise softmax of a score matrix (max-shifted for stability).
void softmax_rows_serial(const Matrix& scores, Matrix& out);
void softmax_rows(const Matrix& scores, Matrix& out);

// Affine per-column map out(r,c) = (m(r,c) - shift[c]) * scale[c], the shared
// form of both rescaling equations.
void affine_columns_serial(const Matrix& m, const std::vector<double>& shift,
                           const std::vector<double>& scale, Matrix& out);
void affine_columns(const Matrix& m, const std::vector<double>& shift,
                    const std::vector<double>& scale, Matrix& out);

}  // namespace povml::kernels
