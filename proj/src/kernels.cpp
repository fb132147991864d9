#include "povml/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "povml/threading.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace povml::kernels {

void column_means_serial(const Matrix& m, std::vector<double>& out) {
    out.assign(m.cols, 0.0);
    for (std::size_t c = 0; c < m.cols; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) sum += m(r, c);
        out[c] = m.rows ? sum / static_cast<double>(m.rows) : 0.0;
    }
}

void column_means(const Matrix& m, std::vector<double>& out) {
    out.assign(m.cols, 0.0);
    const long long p = static_cast<long long>(m.cols);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long c = 0; c < p; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) sum += m(r, static_cast<std::size_t>(c));
        out[static_cast<std::size_t>(c)] =
            m.rows ? sum / static_cast<double>(m.rows) : 0.0;
    }
}

namespace {
double dot_over_rows(const Matrix& m, std::size_t a, std::size_t b) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) sum += m(r, a) * m(r, b);
    return sum;
}
}  // namespace

void covariance_serial(const Matrix& centered, Matrix& out) {
    const std::size_t p = centered.cols;
    out = Matrix(p, p);
    const double denom = static_cast<double>(centered.rows - 1);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double v = dot_over_rows(centered, i, j) / denom;
            out(i, j) = v;
            out(j, i) = v;
        }
    }
}

void covariance(const Matrix& centered, Matrix& out) {
    const std::size_t p = centered.cols;
    out = Matrix(p, p);
    const double denom = static_cast<double>(centered.rows - 1);
    // Flatten the upper triangle so one iteration owns one (i, j) entry; each
    // entry's row sum is accumulated serially, keeping results thread-count
    // independent.
    const long long n_pairs = static_cast<long long>(p * (p + 1) / 2);
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_count())
    for (long long t = 0; t < n_pairs; ++t) {
        // invert t = i*p - i*(i-1)/2 + (j - i)
        std::size_t i = 0;
        long long rem = t;
        while (rem >= static_cast<long long>(p - i)) {
            rem -= static_cast<long long>(p - i);
            ++i;
        }
        const std::size_t j = i + static_cast<std::size_t>(rem);
        const double v = dot_over_rows(centered, i, j) / denom;
        out(i, j) = v;
        out(j, i) = v;
    }
}

namespace {
void knn_one_query(const Matrix& train, const Matrix& queries, std::size_t q, std::size_t k,
                   NeighborList& out) {
    const std::size_t n = train.rows;
    const std::size_t p = train.cols;
    NeighborList all(n);
    const double* qp = queries.row_ptr(q);
    for (std::size_t i = 0; i < n; ++i) {
        const double* tp = train.row_ptr(i);
        double d = 0.0;
        for (std::size_t c = 0; c < p; ++c) {
            const double diff = qp[c] - tp[c];
            d += diff * diff;
        }
        all[i] = {i, d};
    }
    const std::size_t kk = std::min(k, n);
    std::partial_sort(all.begin(), all.begin() + static_cast<long>(kk), all.end(),
                      [](const auto& a, const auto& b) {
                          if (a.second != b.second) return a.second < b.second;
                          return a.first < b.first;
                      });
    out.assign(all.begin(), all.begin() + static_cast<long>(kk));
}
}  // namespace

void knn_search_serial(const Matrix& train, const Matrix& queries, std::size_t k,
                       std::vector<NeighborList>& out) {
    out.assign(queries.rows, {});
    for (std::size_t q = 0; q < queries.rows; ++q) knn_one_query(train, queries, q, k, out[q]);
}

void knn_search(const Matrix& train, const Matrix& queries, std::size_t k,
                std::vector<NeighborList>& out) {
    out.assign(queries.rows, {});
    const long long nq = static_cast<long long>(queries.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long q = 0; q < nq; ++q)
        knn_one_query(train, queries, static_cast<std::size_t>(q), k,
                      out[static_cast<std::size_t>(q)]);
}

namespace {
void softmax_row(const Matrix& scores, Matrix& out, std::size_t r) {
    const std::size_t k = scores.cols;
    double mx = scores(r, 0);
    for (std::size_t c = 1; c < k; ++c) mx = std::max(mx, scores(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double e = std::exp(scores(r, c) - mx);
        out(r, c) = e;
        sum += e;
    }
    for (std::size_t c = 0; c < k; ++c) out(r, c) /= sum;
}
}  // namespace

void softmax_rows_serial(const Matrix& scores, Matrix& out) {
    out = Matrix(scores.rows, scores.cols);
    for (std::size_t r = 0; r < scores.rows; ++r) softmax_row(scores, out, r);
}

void softmax_rows(const Matrix& scores, Matrix& out) {
    out = Matrix(scores.rows, scores.cols);
    const long long n = static_cast<long long>(scores.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long r = 0; r < n; ++r) softmax_row(scores, out, static_cast<std::size_t>(r));
}

void affine_columns_serial(const Matrix& m, const std::vector<double>& shift,
                           const std::vector<double>& scale, Matrix& out) {
    out = Matrix(m.rows, m.cols);
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = (m(r, c) - shift[c]) * scale[c];
}

void affine_columns(const Matrix& m, const std::vector<double>& shift,
                    const std::vector<double>& scale, Matrix& out) {
    out = Matrix(m.rows, m.cols);
    const long long n = static_cast<long long>(m.rows);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (long long r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            out(static_cast<std::size_t>(r), c) =
                (m(static_cast<std::size_t>(r), c) - shift[c]) * scale[c];
}

}  // namespace povml::kernels
