#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Arithmetic inner loops shared by the imputation back-ends: dense
// reductions, trig-table gathers for DFT-style sums, and batched point
// distances. Each kernel has a scalar reference implementation and an
// AVX2+FMA variant; the active table is chosen once at startup from CPU
// capabilities. Set MDI_KERNELS=scalar (or avx2) to override.

namespace mdi::kernels {

struct Ops {
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i a[i]^2
    double (*sum_squares)(const double* a, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // sum_i w[i] * (re[i]^2 + im[i]^2)
    double (*weighted_abs2_sum)(const double* w, const double* re, const double* im,
                                std::size_t n);
    // out_c[i] = scale_c * cos_tab[idx[i]], out_s[i] = scale_s * sin_tab[idx[i]]
    void (*gather_trig_row)(const std::int32_t* idx, std::size_t n, const double* cos_tab,
                            const double* sin_tab, double scale_c, double scale_s,
                            double* out_c, double* out_s);
    // acc_c = sum_i v[i] * cos_tab[idx[i]], acc_s = sum_i v[i] * sin_tab[idx[i]]
    void (*gather_trig_dot)(const double* v, const std::int32_t* idx, std::size_t n,
                            const double* cos_tab, const double* sin_tab, double* acc_c,
                            double* acc_s);
    // out[i] = squared Euclidean distance from query to row i of points (n x dim, row-major)
    void (*sq_dist_batch)(const double* points, std::size_t n, std::size_t dim,
                          const double* query, double* out);
    const char* name;
};

const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const Ops& avx2_ops(); // only valid to call through when avx2_supported()
#endif

const Ops& active();
const char* backend_name();

// Convenience wrappers over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double sum_squares(std::span<const double> a) {
    return active().sum_squares(a.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double weighted_abs2_sum(std::span<const double> w, std::span<const double> re,
                                std::span<const double> im) {
    return active().weighted_abs2_sum(w.data(), re.data(), im.data(), w.size());
}

inline void gather_trig_row(std::span<const std::int32_t> idx, std::span<const double> cos_tab,
                            std::span<const double> sin_tab, double scale_c, double scale_s,
                            double* out_c, double* out_s) {
    active().gather_trig_row(idx.data(), idx.size(), cos_tab.data(), sin_tab.data(), scale_c,
                             scale_s, out_c, out_s);
}

inline void gather_trig_dot(std::span<const double> v, std::span<const std::int32_t> idx,
                            std::span<const double> cos_tab, std::span<const double> sin_tab,
                            double* acc_c, double* acc_s) {
    active().gather_trig_dot(v.data(), idx.data(), v.size(), cos_tab.data(), sin_tab.data(),
                             acc_c, acc_s);
}

inline void sq_dist_batch(const double* points, std::size_t n, std::size_t dim,
                          const double* query, double* out) {
    active().sq_dist_batch(points, n, dim, query, out);
}

} // namespace mdi::kernels
