#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mdi/kernels.hpp"
#include "mdi/random.hpp"

namespace k = mdi::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                  double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * mdi::uniform01(rng);
    return v;
}

std::vector<std::int32_t> random_indices(std::mt19937_64& rng, std::size_t n, int table) {
    std::vector<std::int32_t> idx(n);
    for (auto& i : idx) i = static_cast<std::int32_t>(rng() % static_cast<std::uint64_t>(table));
    return idx;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels match direct formulas") {
    const k::Ops& ops = k::scalar_ops();
    const std::vector<double> a{1.0, -2.0, 3.0, 0.5};
    const std::vector<double> b{2.0, 1.0, -1.0, 4.0};
    CHECK(ops.dot(a.data(), b.data(), 4) == doctest::Approx(-1.0));
    CHECK(ops.sum_squares(a.data(), 4) == doctest::Approx(14.25));

    std::vector<double> y = b;
    ops.axpy(0.5, a.data(), y.data(), 4);
    CHECK(y[0] == doctest::Approx(2.5));
    CHECK(y[3] == doctest::Approx(4.25));

    const std::vector<double> w{1.0, 2.0, 0.0, 3.0};
    CHECK(ops.weighted_abs2_sum(w.data(), a.data(), b.data(), 4) ==
          doctest::Approx(1.0 * 5.0 + 2.0 * 5.0 + 3.0 * 16.25));

    const std::vector<double> pts{0.0, 0.0, 3.0, 4.0};
    const std::vector<double> q{0.0, 0.0};
    std::vector<double> out(2);
    ops.sq_dist_batch(pts.data(), 2, 2, q.data(), out.data());
    CHECK(out[0] == doctest::Approx(0.0));
    CHECK(out[1] == doctest::Approx(25.0));
}

TEST_CASE("gather kernels agree with table lookups") {
    const k::Ops& ops = k::active();
    const int table = 16;
    std::vector<double> cos_tab(table), sin_tab(table);
    for (int t = 0; t < table; ++t) {
        cos_tab[t] = std::cos(2.0 * M_PI * t / table);
        sin_tab[t] = std::sin(2.0 * M_PI * t / table);
    }
    std::mt19937_64 rng(7);
    const auto idx = random_indices(rng, 13, table);
    const auto v = random_vector(rng, 13);

    std::vector<double> out_c(13), out_s(13);
    ops.gather_trig_row(idx.data(), 13, cos_tab.data(), sin_tab.data(), 2.0, -1.0, out_c.data(),
                        out_s.data());
    double acc_c = 0.0, acc_s = 0.0;
    ops.gather_trig_dot(v.data(), idx.data(), 13, cos_tab.data(), sin_tab.data(), &acc_c,
                        &acc_s);

    double ref_c = 0.0, ref_s = 0.0;
    for (std::size_t i = 0; i < 13; ++i) {
        CHECK(out_c[i] == doctest::Approx(2.0 * cos_tab[idx[i]]));
        CHECK(out_s[i] == doctest::Approx(-sin_tab[idx[i]]));
        ref_c += v[i] * cos_tab[idx[i]];
        ref_s += v[i] * sin_tab[idx[i]];
    }
    CHECK(acc_c == doctest::Approx(ref_c).epsilon(1e-12));
    CHECK(acc_s == doctest::Approx(ref_s).epsilon(1e-12));
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 variants are equivalent to the scalar reference") {
    if (!k::avx2_supported()) return;
    const k::Ops& simd = k::avx2_ops();
    const k::Ops& ref = k::scalar_ops();
    std::mt19937_64 rng(42);

    for (const std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4},
                                std::size_t{7}, std::size_t{8}, std::size_t{31},
                                std::size_t{100}, std::size_t{1023}}) {
        CAPTURE(n);
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        const auto w = random_vector(rng, n, 0.0, 2.0);
        const double scale = static_cast<double>(n) + 1.0;

        CHECK(simd.dot(a.data(), b.data(), n) ==
              doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(1e-12).scale(scale));
        CHECK(simd.sum_squares(a.data(), n) ==
              doctest::Approx(ref.sum_squares(a.data(), n)).epsilon(1e-12).scale(scale));
        CHECK(simd.weighted_abs2_sum(w.data(), a.data(), b.data(), n) ==
              doctest::Approx(ref.weighted_abs2_sum(w.data(), a.data(), b.data(), n))
                  .epsilon(1e-12)
                  .scale(scale));

        std::vector<double> y1 = b, y2 = b;
        simd.axpy(0.37, a.data(), y1.data(), n);
        ref.axpy(0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]));

        const int table = 50;
        std::vector<double> cos_tab(table), sin_tab(table);
        for (int t = 0; t < table; ++t) {
            cos_tab[t] = std::cos(2.0 * M_PI * t / table);
            sin_tab[t] = std::sin(2.0 * M_PI * t / table);
        }
        const auto idx = random_indices(rng, n, table);
        std::vector<double> c1(n), s1(n), c2(n), s2(n);
        simd.gather_trig_row(idx.data(), n, cos_tab.data(), sin_tab.data(), 1.5, -2.0, c1.data(),
                             s1.data());
        ref.gather_trig_row(idx.data(), n, cos_tab.data(), sin_tab.data(), 1.5, -2.0, c2.data(),
                            s2.data());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(c1[i] == doctest::Approx(c2[i]));
            CHECK(s1[i] == doctest::Approx(s2[i]));
        }

        double dc1 = 0, ds1 = 0, dc2 = 0, ds2 = 0;
        simd.gather_trig_dot(a.data(), idx.data(), n, cos_tab.data(), sin_tab.data(), &dc1,
                             &ds1);
        ref.gather_trig_dot(a.data(), idx.data(), n, cos_tab.data(), sin_tab.data(), &dc2,
                            &ds2);
        CHECK(dc1 == doctest::Approx(dc2).epsilon(1e-12).scale(scale));
        CHECK(ds1 == doctest::Approx(ds2).epsilon(1e-12).scale(scale));

        for (const std::size_t dim : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
            const std::size_t pts = n / dim;
            if (pts == 0) continue;
            const auto cloud = random_vector(rng, pts * dim);
            const auto q = random_vector(rng, dim);
            std::vector<double> o1(pts), o2(pts);
            simd.sq_dist_batch(cloud.data(), pts, dim, q.data(), o1.data());
            ref.sq_dist_batch(cloud.data(), pts, dim, q.data(), o2.data());
            for (std::size_t i = 0; i < pts; ++i)
                CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-13));
        }
    }
}
#endif

TEST_CASE("dispatch reports a backend") {
    CHECK(k::backend_name() != nullptr);
    const std::string name = k::backend_name();
    CHECK((name == "scalar" || name == "avx2"));
}

} // TEST_SUITE
