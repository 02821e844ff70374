#include "mdi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdi/kernels.hpp"

namespace mdi {

namespace {

struct TrigTables {
    std::vector<double> cos_tab, sin_tab;

    explicit TrigTables(int n) : cos_tab(static_cast<std::size_t>(n)),
                                 sin_tab(static_cast<std::size_t>(n)) {
        for (int t = 0; t < n; ++t) {
            const double phase = kTwoPi * t / n;
            cos_tab[static_cast<std::size_t>(t)] = std::cos(phase);
            sin_tab[static_cast<std::size_t>(t)] = std::sin(phase);
        }
    }
};

// Multi-indices of the listed flat indices, rows of length d.
std::vector<std::int32_t> multi_index_table(const UniformGrid& grid,
                                            std::span<const std::size_t> flats) {
    const int d = grid.dim();
    std::vector<std::int32_t> table(flats.size() * static_cast<std::size_t>(d));
    std::vector<int> mi(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < flats.size(); ++i) {
        grid.unflatten(flats[i], mi);
        for (int j = 0; j < d; ++j)
            table[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] =
                static_cast<std::int32_t>(mi[static_cast<std::size_t>(j)]);
    }
    return table;
}

std::vector<std::size_t> all_flats(std::size_t n) {
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
}

// idx[p] = (sum_j k_j * mi[p][j]) mod N
void phase_indices(std::span<const int> freq, std::span<const std::int32_t> mi_table, int dim,
                   int n_points_per_axis, std::vector<std::int32_t>& idx_out) {
    const std::size_t count = mi_table.size() / static_cast<std::size_t>(dim);
    idx_out.resize(count);
    for (std::size_t p = 0; p < count; ++p) {
        std::int64_t acc = 0;
        const std::int32_t* row = mi_table.data() + p * static_cast<std::size_t>(dim);
        for (int j = 0; j < dim; ++j)
            acc += static_cast<std::int64_t>(freq[static_cast<std::size_t>(j)]) * row[j];
        idx_out[p] = static_cast<std::int32_t>(acc % n_points_per_axis);
    }
}

bool has_zero_component(std::span<const int> freq) {
    return std::any_of(freq.begin(), freq.end(), [](int k) { return k == 0; });
}

} // namespace

std::size_t SpectralWeights::positive_count() const {
    std::size_t n = 0;
    for (const double w : values)
        if (w > 0.0) ++n;
    return n;
}

double decay_bound(std::span<const int> freq, const UniformGrid& grid,
                   const DecayParams& params) {
    const int d = grid.dim();
    const int n = grid.points_per_axis();
    const int m = params.smoothness_order;
    if (m < 1) fail(errc::invalid_argument, "smoothness order must be >= 1");
    if (has_zero_component(freq))
        fail(errc::undefined_frequency,
             "decay bound is undefined at frequencies with a zero component");
    double gaps = 1.0;
    for (int j = 0; j < d; ++j) {
        const double gap = 2.0 * std::abs(std::sin(M_PI * freq[static_cast<std::size_t>(j)] / n));
        gaps *= std::pow(gap, -m);
    }
    return std::pow(static_cast<double>(n), d) * std::pow(kTwoPi / n, static_cast<double>(m) * d) *
           params.derivative_bound * gaps;
}

SpectralWeights build_weights(const UniformGrid& grid, const DecayParams& params,
                              WeightScheme scheme) {
    if (!(params.truncation_bound > 0.0))
        fail(errc::invalid_argument, "truncation bound must be positive");
    SpectralWeights out;
    out.scheme = scheme;
    out.values.assign(grid.point_count(), 0.0);
    std::vector<int> freq(static_cast<std::size_t>(grid.dim()));
    for (std::size_t kf = 0; kf < out.values.size(); ++kf) {
        grid.unflatten(kf, freq);
        if (has_zero_component(freq)) continue; // unpenalized under both schemes
        const double bound = decay_bound(freq, grid, params);
        if (scheme == WeightScheme::prescribed_decay)
            out.values[kf] = 1.0 / (bound * bound);
        else
            out.values[kf] = (bound < params.truncation_bound) ? 1.0 : 0.0;
    }
    return out;
}

SpectralSystem assemble_spectral(const GridFunction& gf, const SpectralWeights& weights) {
    const UniformGrid& grid = gf.grid();
    if (weights.values.size() != grid.point_count())
        fail(errc::invalid_argument, "weight array does not match the grid");
    if (gf.all_known()) fail(errc::nothing_to_impute, "grid has no unknown points");
    if (weights.positive_count() == 0)
        fail(errc::degenerate_system, "all spectral weights are zero");

    const int d = grid.dim();
    const int n = grid.points_per_axis();

    SpectralSystem sys{.matrix = {},
                       .rhs = {},
                       .unknown_index = gf.mask().unknown_indices(),
                       .known_index = gf.mask().known_indices(),
                       .penalized_freq = {},
                       .sqrt_weight = {},
                       .weights = weights,
                       .input = gf,
                       .rank_tolerance = 1e-12,
                       .solve_truncation = 0.0};
    for (std::size_t kf = 0; kf < weights.values.size(); ++kf)
        if (weights.values[kf] > 0.0) sys.penalized_freq.push_back(kf);
    sys.sqrt_weight.resize(sys.penalized_freq.size());
    for (std::size_t r = 0; r < sys.penalized_freq.size(); ++r)
        sys.sqrt_weight[r] = std::sqrt(weights.values[sys.penalized_freq[r]]);

    const TrigTables tables(n);
    const std::vector<std::int32_t> unknown_mi = multi_index_table(grid, sys.unknown_index);
    const std::vector<std::int32_t> freq_mi = multi_index_table(grid, sys.penalized_freq);

    const std::size_t rows = 2 * sys.penalized_freq.size();
    const std::size_t cols = sys.unknown_index.size();
    sys.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));

    // Column-wise fill: for a fixed unknown point, gather the phase entries
    // over all penalized frequencies, then interleave the re/im rows.
    std::vector<std::int32_t> idx;
    std::vector<double> buf_c(sys.penalized_freq.size());
    std::vector<double> buf_s(sys.penalized_freq.size());
    std::vector<int> point_mi(static_cast<std::size_t>(d));
    for (std::size_t c = 0; c < cols; ++c) {
        for (int j = 0; j < d; ++j)
            point_mi[static_cast<std::size_t>(j)] =
                unknown_mi[c * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
        phase_indices(point_mi, freq_mi, d, n, idx);
        kernels::gather_trig_row(idx, tables.cos_tab, tables.sin_tab, 1.0, -1.0, buf_c.data(),
                                 buf_s.data());
        double* col = sys.matrix.col(static_cast<Eigen::Index>(c)).data();
        for (std::size_t r = 0; r < sys.penalized_freq.size(); ++r) {
            col[2 * r] = sys.sqrt_weight[r] * buf_c[r];
            col[2 * r + 1] = sys.sqrt_weight[r] * buf_s[r];
        }
    }

    sys.rhs = spectral_rhs(sys, gf);
    return sys;
}

Eigen::VectorXd spectral_rhs(const SpectralSystem& sys, const GridFunction& values) {
    const UniformGrid& grid = values.grid();
    if (!grid.same_shape(sys.input.grid()))
        fail(errc::invalid_argument, "value grid shape does not match the system");
    for (const std::size_t flat : sys.unknown_index)
        if (values.mask().known(flat))
            fail(errc::invalid_argument, "value mask does not match the assembled system");
    const int d = grid.dim();
    const int n = grid.points_per_axis();
    const TrigTables tables(n);
    const std::vector<std::int32_t> known_mi = multi_index_table(grid, sys.known_index);

    std::vector<double> known_values(sys.known_index.size());
    for (std::size_t i = 0; i < sys.known_index.size(); ++i)
        known_values[i] = values.value(sys.known_index[i]);

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(2 * sys.penalized_freq.size()));
    std::vector<std::int32_t> idx;
    std::vector<int> freq(static_cast<std::size_t>(d));
    for (std::size_t r = 0; r < sys.penalized_freq.size(); ++r) {
        grid.unflatten(sys.penalized_freq[r], freq);
        phase_indices(freq, known_mi, d, n, idx);
        double acc_c = 0.0, acc_s = 0.0;
        kernels::gather_trig_dot(known_values, idx, tables.cos_tab, tables.sin_tab, &acc_c,
                                 &acc_s);
        // known-data part of the coefficient is acc_c - i*acc_s
        rhs(static_cast<Eigen::Index>(2 * r)) = -sys.sqrt_weight[r] * acc_c;
        rhs(static_cast<Eigen::Index>(2 * r + 1)) = sys.sqrt_weight[r] * acc_s;
    }
    return rhs;
}

SpectralSolver::SpectralSolver(const SpectralSystem& sys)
    : factorization_(sys.matrix, sys.rank_tolerance, sys.solve_truncation) {}

SpectralResult SpectralSolver::solve(const SpectralSystem& sys) const {
    Eigen::VectorXd x = factorization_.solve(sys.rhs);
    std::vector<double> imputed(x.data(), x.data() + x.size());
    SpectralResult out{.completed = sys.input.with_imputed(sys.unknown_index, imputed),
                       .diag = {}};

    out.diag.cond = factorization_.cond();
    out.diag.rank = factorization_.rank();
    out.diag.rank_deficient = factorization_.rank_deficient();
    out.diag.residual_norm = (sys.matrix * x - sys.rhs).norm();
    out.diag.cost = out.diag.residual_norm * out.diag.residual_norm;

    const auto coeffs = dft_forward(out.completed.grid(), out.completed.raw_values());
    for (std::size_t kf = 0; kf < coeffs.size(); ++kf) {
        const double mag = std::abs(coeffs[kf]);
        if (sys.weights.values[kf] > 0.0)
            out.diag.max_penalized_coeff = std::max(out.diag.max_penalized_coeff, mag);
        else if (kf != 0)
            out.diag.max_unpenalized_coeff = std::max(out.diag.max_unpenalized_coeff, mag);
    }
    return out;
}

SpectralResult SpectralSolver::solve_with_values(const SpectralSystem& sys,
                                                 const GridFunction& values) const {
    SpectralSystem copy = sys;
    copy.input = values;
    copy.rhs = spectral_rhs(sys, values);
    return solve(copy);
}

SpectralResult solve_spectral(const SpectralSystem& sys) {
    return SpectralSolver(sys).solve(sys);
}

std::vector<std::complex<double>> dft_forward(const UniformGrid& grid,
                                              std::span<const double> values) {
    if (values.size() != grid.point_count())
        fail(errc::invalid_argument, "value count does not match grid");
    const int d = grid.dim();
    const int n = grid.points_per_axis();
    const TrigTables tables(n);
    const std::vector<std::size_t> flats = all_flats(grid.point_count());
    const std::vector<std::int32_t> mi_table = multi_index_table(grid, flats);

    std::vector<std::complex<double>> coeffs(grid.point_count());
    std::vector<std::int32_t> idx;
    std::vector<int> freq(static_cast<std::size_t>(d));
    std::vector<double> vals(values.begin(), values.end());
    for (std::size_t kf = 0; kf < coeffs.size(); ++kf) {
        grid.unflatten(kf, freq);
        phase_indices(freq, mi_table, d, n, idx);
        double acc_c = 0.0, acc_s = 0.0;
        kernels::gather_trig_dot(vals, idx, tables.cos_tab, tables.sin_tab, &acc_c, &acc_s);
        coeffs[kf] = std::complex<double>(acc_c, -acc_s);
    }
    return coeffs;
}

std::vector<std::complex<double>> dft_inverse(const UniformGrid& grid,
                                              std::span<const std::complex<double>> coeffs) {
    if (coeffs.size() != grid.point_count())
        fail(errc::invalid_argument, "coefficient count does not match grid");
    const int d = grid.dim();
    const int n = grid.points_per_axis();
    const TrigTables tables(n);
    const std::vector<std::size_t> flats = all_flats(grid.point_count());
    const std::vector<std::int32_t> mi_table = multi_index_table(grid, flats);

    std::vector<double> re(coeffs.size()), im(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        re[i] = coeffs[i].real();
        im[i] = coeffs[i].imag();
    }

    const double scale = 1.0 / static_cast<double>(grid.point_count());
    std::vector<std::complex<double>> values(grid.point_count());
    std::vector<std::int32_t> idx;
    std::vector<int> point_mi(static_cast<std::size_t>(d));
    for (std::size_t p = 0; p < values.size(); ++p) {
        grid.unflatten(p, point_mi);
        phase_indices(point_mi, mi_table, d, n, idx);
        double re_c = 0.0, re_s = 0.0, im_c = 0.0, im_s = 0.0;
        kernels::gather_trig_dot(re, idx, tables.cos_tab, tables.sin_tab, &re_c, &re_s);
        kernels::gather_trig_dot(im, idx, tables.cos_tab, tables.sin_tab, &im_c, &im_s);
        // sum (a + i b)(cos + i sin) = (a cos - b sin) + i (a sin + b cos)
        values[p] = scale * std::complex<double>(re_c - im_s, re_s + im_c);
    }
    return values;
}

bool verify_optimality_bound(const GridFunction& completed,
                             std::span<const double> coeff_bounds) {
    const UniformGrid& grid = completed.grid();
    if (coeff_bounds.size() != grid.point_count())
        fail(errc::invalid_argument, "bound array does not match grid");
    if (!completed.all_known())
        fail(errc::unknown_value, "optimality bound requires a completed grid");
    const auto coeffs = dft_forward(grid, completed.raw_values());
    const double amplification = std::pow(static_cast<double>(grid.points_per_axis()),
                                          grid.dim() / 2.0);
    std::vector<int> freq(static_cast<std::size_t>(grid.dim()));
    for (std::size_t kf = 0; kf < coeffs.size(); ++kf) {
        grid.unflatten(kf, freq);
        if (has_zero_component(freq)) continue;
        if (std::abs(coeffs[kf]) > amplification * coeff_bounds[kf]) return false;
    }
    return true;
}

InverseEstimateReport inverse_estimate_check(std::span<const std::complex<double>> coeffs,
                                             const UniformGrid& grid, int smoothness_order,
                                             double coeff_constant) {
    const int d = grid.dim();
    const int n = grid.points_per_axis();
    const int m = smoothness_order;
    if (m < 2) fail(errc::invalid_argument, "smoothness order must be >= 2");
    if (coeffs.size() != grid.point_count())
        fail(errc::invalid_argument, "coefficient count does not match grid");
    if (!(coeff_constant > 0.0)) fail(errc::invalid_argument, "constant must be positive");

    const DecayParams envelope{.smoothness_order = m,
                               .truncation_bound = 1.0,
                               .derivative_bound = coeff_constant};
    std::vector<int> freq(static_cast<std::size_t>(d));
    for (std::size_t kf = 0; kf < coeffs.size(); ++kf) {
        grid.unflatten(kf, freq);
        const double mag = std::abs(coeffs[kf]);
        if (has_zero_component(freq)) {
            if (mag != 0.0)
                fail(errc::hypothesis_violation,
                     "coefficients with a zero frequency component must vanish");
            continue;
        }
        if (mag > decay_bound(freq, grid, envelope) * (1.0 + 1e-12))
            fail(errc::hypothesis_violation,
                 "coefficient magnitude exceeds the decay envelope at flat frequency " +
                     std::to_string(kf));
    }

    const auto values = dft_inverse(grid, coeffs);

    // Mixed forward differences of order m-2 per axis, periodic.
    std::vector<std::complex<double>> work(values.begin(), values.end());
    std::vector<std::complex<double>> next(work.size());
    std::vector<int> mi(static_cast<std::size_t>(d));
    std::vector<int> shifted(static_cast<std::size_t>(d));
    for (int axis = 0; axis < d; ++axis) {
        for (int rep = 0; rep < m - 2; ++rep) {
            for (std::size_t p = 0; p < work.size(); ++p) {
                grid.unflatten(p, mi);
                shifted.assign(mi.begin(), mi.end());
                shifted[static_cast<std::size_t>(axis)] =
                    (mi[static_cast<std::size_t>(axis)] + 1) % n;
                next[p] = work[grid.flatten(shifted)] - work[p];
            }
            work.swap(next);
        }
    }

    const double h = grid.mesh_size();
    const double divide = std::pow(h, static_cast<double>(d) * (m - 2));
    double measured = 0.0;
    for (const auto& v : work) measured = std::max(measured, std::abs(v));
    measured /= divide;

    InverseEstimateReport report;
    const double factor = (M_PI * M_PI / 3.0) * (1.0 - 1.0 / (static_cast<double>(n) * n));
    report.bound = std::pow(factor, d) * coeff_constant;
    report.measured = measured;
    report.pass = measured <= report.bound;
    return report;
}

double frequency_gap_inverse_square_sum(int points_per_axis) {
    if (points_per_axis < 2) fail(errc::invalid_argument, "need at least 2 points");
    double acc = 0.0;
    for (int k = 1; k < points_per_axis; ++k) {
        const double gap = 2.0 * std::sin(M_PI * k / points_per_axis);
        acc += 1.0 / (gap * gap);
    }
    return acc;
}

} // namespace mdi
