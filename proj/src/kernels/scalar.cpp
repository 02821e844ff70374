#include "mdi/kernels.hpp"

// Reference kernels. Plain loops, no target-specific code; the AVX2
// variants are equivalence-tested against these.

namespace mdi::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_squares_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double weighted_abs2_sum_scalar(const double* w, const double* re, const double* im,
                                std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * (re[i] * re[i] + im[i] * im[i]);
    return acc;
}

void gather_trig_row_scalar(const std::int32_t* idx, std::size_t n, const double* cos_tab,
                            const double* sin_tab, double scale_c, double scale_s,
                            double* out_c, double* out_s) {
    for (std::size_t i = 0; i < n; ++i) {
        out_c[i] = scale_c * cos_tab[idx[i]];
        out_s[i] = scale_s * sin_tab[idx[i]];
    }
}

void gather_trig_dot_scalar(const double* v, const std::int32_t* idx, std::size_t n,
                            const double* cos_tab, const double* sin_tab, double* acc_c,
                            double* acc_s) {
    double c = 0.0, s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c += v[i] * cos_tab[idx[i]];
        s += v[i] * sin_tab[idx[i]];
    }
    *acc_c = c;
    *acc_s = s;
}

void sq_dist_batch_scalar(const double* points, std::size_t n, std::size_t dim,
                          const double* query, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points + i * dim;
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double diff = p[j] - query[j];
            acc += diff * diff;
        }
        out[i] = acc;
    }
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{dot_scalar,
                         sum_squares_scalar,
                         axpy_scalar,
                         weighted_abs2_sum_scalar,
                         gather_trig_row_scalar,
                         gather_trig_dot_scalar,
                         sq_dist_batch_scalar,
                         "scalar"};
    return ops;
}

} // namespace mdi::kernels
