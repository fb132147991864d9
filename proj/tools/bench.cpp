// Timing comparison of the serial reference kernels against the OpenMP
// versions. Sizes roughly match the wrangled survey data.
#include <cstdio>
#include <string>

#include "povml/kernels.hpp"
#include "povml/rng.hpp"
#include "povml/threading.hpp"

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

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

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Matrix m(rows, cols);
    Rng rng(seed);
    for (double& v : m.data) v = rng.unit() * 10.0 - 5.0;
    return m;
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-18s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n = 9473;
    std::size_t p = 125;
    if (argc > 1) n = std::stoul(argv[1]);
    if (argc > 2) p = std::stoul(argv[2]);
    std::printf("kernel benchmark: %zu rows x %zu features, %d threads\n", n, p,
                thread_count());

    const Matrix data = random_matrix(n, p, 1);
    const Matrix queries = random_matrix(256, p, 2);
    const Matrix scores = random_matrix(n, 4, 3);

    std::vector<double> means;
    kernels::column_means(data, means);
    Matrix centered = data;
    for (std::size_t r = 0; r < centered.rows; ++r)
        for (std::size_t c = 0; c < centered.cols; ++c) centered(r, c) -= means[c];

    {
        std::vector<double> out;
        const double s = time_best_of(3, [&] { kernels::column_means_serial(data, out); });
        const double par = time_best_of(3, [&] { kernels::column_means(data, out); });
        report("column_means", s, par);
    }
    {
        Matrix out;
        const double s = time_best_of(3, [&] { kernels::covariance_serial(centered, out); });
        const double par = time_best_of(3, [&] { kernels::covariance(centered, out); });
        report("covariance", s, par);
    }
    {
        std::vector<kernels::NeighborList> out;
        const double s =
            time_best_of(3, [&] { kernels::knn_search_serial(data, queries, 5, out); });
        const double par = time_best_of(3, [&] { kernels::knn_search(data, queries, 5, out); });
        report("knn_search", s, par);
    }
    {
        Matrix out;
        const double s = time_best_of(3, [&] { kernels::softmax_rows_serial(scores, out); });
        const double par = time_best_of(3, [&] { kernels::softmax_rows(scores, out); });
        report("softmax_rows", s, par);
    }
    {
        std::vector<double> shift(p, 1.0), scale(p, 0.5);
        Matrix out;
        const double s =
            time_best_of(3, [&] { kernels::affine_columns_serial(data, shift, scale, out); });
        const double par =
            time_best_of(3, [&] { kernels::affine_columns(data, shift, scale, out); });
        report("affine_columns", s, par);
    }
    return 0;
}
