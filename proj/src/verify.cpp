#include "mdi/verify.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "mdi/lsq.hpp"
#include "mdi/random.hpp"
#include "mdi/spectral.hpp"
#include "mdi/variational.hpp"

namespace mdi {

namespace {

std::string tag(const std::string& base, int a, int b = -1) {
    std::string out = base + "[" + std::to_string(a);
    if (b >= 0) out += "," + std::to_string(b);
    return out + "]";
}

} // namespace

std::vector<CheckResult> verify_sum_identity(int n_min, int n_max) {
    std::vector<CheckResult> out;
    for (int n = n_min; n <= n_max; ++n) {
        const double measured = frequency_gap_inverse_square_sum(n);
        const double expected = (static_cast<double>(n) * n - 1.0) / 12.0;
        const double rel = std::abs(measured - expected) / expected;
        out.push_back({tag("gap-sum-identity", n), rel <= 1e-10, measured, expected});
    }
    return out;
}

std::vector<CheckResult> verify_inverse_operator_bound(int k_max, int n_max) {
    std::vector<CheckResult> out;
    for (int k = 1; k <= k_max; ++k)
        for (int n = 1; n <= n_max; ++n) {
            const double measured = infinity_norm_inverse(difference_dirichlet_matrix(n, k));
            const auto bound = inverse_operator_bound(n, k);
            out.push_back({tag("inverse-operator-bound", k, n),
                           measured <= bound.exact_bound * (1.0 + 1e-10), measured,
                           bound.exact_bound});
        }
    return out;
}

std::vector<CheckResult> verify_inverse_estimate(int draws, std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    for (int draw = 0; draw < draws; ++draw) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const int n = dim == 1 ? 8 + static_cast<int>(rng() % 25) // up to 32
                               : 6 + static_cast<int>(rng() % 11); // up to 16
        const int order = 3 + static_cast<int>(rng() % 3);
        const double constant = 0.5 + uniform01(rng);
        const UniformGrid grid(dim, n);
        const DecayParams envelope{.smoothness_order = order, .truncation_bound = 1.0,
                                   .derivative_bound = constant};

        std::vector<std::complex<double>> coeffs(grid.point_count(), {0.0, 0.0});
        std::vector<int> freq(static_cast<std::size_t>(dim));
        for (std::size_t kf = 0; kf < coeffs.size(); ++kf) {
            grid.unflatten(kf, freq);
            bool zero = false;
            for (const int kj : freq) zero |= (kj == 0);
            if (zero) continue;
            const double magnitude = uniform01(rng) * decay_bound(freq, grid, envelope);
            const double phase = kTwoPi * uniform01(rng);
            coeffs[kf] = std::polar(magnitude, phase);
        }
        const auto report = inverse_estimate_check(coeffs, grid, order, constant);
        out.push_back({tag("inverse-estimate", draw), report.pass, report.measured, report.bound});
    }
    return out;
}

std::vector<CheckResult> verify_coefficient_optimality(int instances, std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    for (int inst = 0; inst < instances; ++inst) {
        const int dim = (inst % 2 == 0) ? 1 : 2;
        const int n = dim == 1 ? 16 + static_cast<int>(rng() % 17) : 10 + static_cast<int>(rng() % 5);
        const int order = 2 + static_cast<int>(rng() % 2);
        const UniformGrid grid(dim, n);

        // data from a product of sine waves with a known mixed-derivative
        // bound: amplitude * w1^order * w2^order
        const double amplitude = 0.3 + uniform01(rng);
        const int w1 = 1 + static_cast<int>(rng() % 2);
        const int w2 = 1 + static_cast<int>(rng() % 2);
        const double phase1 = kTwoPi * uniform01(rng);
        const double phase2 = kTwoPi * uniform01(rng);
        double deriv_bound = amplitude * std::pow(static_cast<double>(w1), order);
        if (dim == 2) deriv_bound *= std::pow(static_cast<double>(w2), order);

        std::vector<double> values(grid.point_count());
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (std::size_t flat = 0; flat < values.size(); ++flat) {
            grid.point(grid.unflatten(flat), x);
            values[flat] = amplitude * std::sin(w1 * x[0] + phase1);
            if (dim == 2) values[flat] *= std::sin(w2 * x[1] + phase2);
        }

        std::vector<std::uint8_t> known(grid.point_count(), 1);
        const std::size_t hole = 2 + rng() % (grid.point_count() / 8);
        for (std::size_t t = 0; t < hole; ++t) known[rng() % known.size()] = 0;
        const GridFunction gf(grid, values, GridMask(known));
        if (gf.all_known()) continue;

        const DecayParams params{.smoothness_order = order, .truncation_bound = 1.0,
                                 .derivative_bound = deriv_bound};
        const auto weights = build_weights(grid, params, WeightScheme::prescribed_decay);
        const auto result = solve_spectral(assemble_spectral(gf, weights));

        std::vector<double> bounds(grid.point_count(), 0.0);
        std::vector<int> freq(static_cast<std::size_t>(dim));
        for (std::size_t kf = 0; kf < bounds.size(); ++kf) {
            grid.unflatten(kf, freq);
            bool zero = false;
            for (const int kj : freq) zero |= (kj == 0);
            if (!zero) bounds[kf] = decay_bound(freq, grid, params);
        }
        const bool pass = verify_optimality_bound(result.completed, bounds);
        out.push_back({tag("coefficient-optimality", inst), pass, result.diag.cost, 0.0});
    }
    return out;
}

std::vector<CheckResult> verify_polynomial_reproduction() {
    std::vector<CheckResult> out;
    for (const int dim : {1, 2})
        for (const int k : {1, 2, 3}) {
            const int n = dim == 1 ? 32 : 20;
            const UniformGrid grid(dim, n);
            std::vector<double> values(grid.point_count());
            std::vector<std::uint8_t> known(grid.point_count(), 1);
            std::vector<double> x(static_cast<std::size_t>(dim));
            const int degree = 2 * k - 1;
            for (std::size_t flat = 0; flat < values.size(); ++flat) {
                grid.point(grid.unflatten(flat), x);
                const double u = x[0] / kTwoPi;
                const double v = dim == 2 ? x[1] / kTwoPi : 0.0;
                values[flat] = std::pow(u, degree) - 2.0 * u * v + 0.5;
                double dist2 = 0.0;
                for (int j = 0; j < dim; ++j)
                    dist2 += (x[static_cast<std::size_t>(j)] - M_PI) *
                             (x[static_cast<std::size_t>(j)] - M_PI);
                if (dist2 <= 0.25) known[flat] = 0;
            }
            std::vector<double> exact = values;
            const GridFunction gf(grid, values, GridMask(known));
            const auto patch = assemble_variational(gf, {.half_order = k});
            const auto result = solve_variational(patch);
            double max_rel = 0.0;
            for (const std::size_t flat : patch.unknown_index)
                max_rel = std::max(max_rel, std::abs(result.completed.value(flat) - exact[flat]) /
                                                std::max(1.0, std::abs(exact[flat])));
            out.push_back({tag("polynomial-reproduction", dim, k), max_rel <= 1e-8, max_rel, 1e-8});
        }
    return out;
}

namespace {

// Reference route for the solver-equivalence check: explicit normal
// equations with a hand-rolled Cholesky, no shared code with lsq_solve.
std::vector<double> normal_equations_reference(std::size_t m, std::size_t n,
                                               const std::vector<double>& a,
                                               const std::vector<double>& b) {
    std::vector<double> ata(n * n, 0.0), atb(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < n; ++i) {
            atb[i] += a[r * n + i] * b[r];
            for (std::size_t j = i; j < n; ++j) ata[i * n + j] += a[r * n + i] * a[r * n + j];
        }
    std::vector<double> chol(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = (j < i) ? ata[j * n + i] : ata[i * n + i];
            for (std::size_t t = 0; t < j; ++t) acc -= chol[i * n + t] * chol[j * n + t];
            if (i == j)
                chol[i * n + i] = std::sqrt(acc);
            else
                chol[i * n + j] = acc / chol[j * n + j];
        }
    std::vector<double> y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = atb[i];
        for (std::size_t t = 0; t < i; ++t) acc -= chol[i * n + t] * y[t];
        y[i] = acc / chol[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = y[ii];
        for (std::size_t t = ii + 1; t < n; ++t) acc -= chol[t * n + ii] * x[t];
        x[ii] = acc / chol[ii * n + ii];
    }
    return x;
}

} // namespace

std::vector<CheckResult> verify_solver_equivalence(int instances, std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    for (int inst = 0; inst < instances; ++inst) {
        const int dim = (inst % 2 == 0) ? 2 : 1;
        const int n = dim == 2 ? 16 + static_cast<int>(rng() % 5) : 48;
        const int k = 1 + static_cast<int>(rng() % 3);
        const UniformGrid grid(dim, n);
        const double radius = dim == 2 ? 0.35 + 0.25 * uniform01(rng) : 0.5 + 0.5 * uniform01(rng);

        std::vector<double> values(grid.point_count());
        std::vector<std::uint8_t> known(grid.point_count(), 1);
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (std::size_t flat = 0; flat < values.size(); ++flat) {
            grid.point(grid.unflatten(flat), x);
            values[flat] = std::sin(x[0] + 0.4);
            if (dim == 2) values[flat] *= std::cos(0.8 * x[1]);
            double dist2 = 0.0;
            for (int j = 0; j < dim; ++j)
                dist2 += (x[static_cast<std::size_t>(j)] - M_PI) *
                         (x[static_cast<std::size_t>(j)] - M_PI);
            if (dist2 <= radius * radius) known[flat] = 0;
        }
        const GridFunction gf(grid, values, GridMask(known));
        const auto patch = assemble_variational(gf, {.half_order = k});
        if (patch.unknown_index.size() > 200) continue;
        const auto result = solve_variational(patch);

        const Eigen::MatrixXd dense(patch.matrix);
        std::vector<double> a(static_cast<std::size_t>(dense.size()));
        for (Eigen::Index r = 0; r < dense.rows(); ++r)
            for (Eigen::Index c = 0; c < dense.cols(); ++c)
                a[static_cast<std::size_t>(r * dense.cols() + c)] = dense(r, c);
        const std::vector<double> b(patch.rhs.data(), patch.rhs.data() + patch.rhs.size());
        const auto reference = normal_equations_reference(
            static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()), a, b);

        double max_rel = 0.0;
        for (std::size_t c = 0; c < patch.unknown_index.size(); ++c) {
            const double got = result.completed.value(patch.unknown_index[c]);
            max_rel = std::max(max_rel,
                               std::abs(got - reference[c]) / std::max(1.0, std::abs(reference[c])));
        }
        out.push_back({tag("solver-equivalence", inst), max_rel <= 1e-8, max_rel, 1e-8});
    }
    return out;
}

std::vector<CheckResult> verify_all() {
    std::vector<CheckResult> out;
    for (auto&& group :
         {verify_sum_identity(), verify_inverse_operator_bound(), verify_inverse_estimate(),
          verify_coefficient_optimality(), verify_polynomial_reproduction(),
          verify_solver_equivalence()})
        out.insert(out.end(), group.begin(), group.end());
    return out;
}

} // namespace mdi
