#include "mdi/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mdi/lsq.hpp"
#include "mdi/random.hpp"

namespace mdi {

namespace {

// Enumerate the centers of the rectangle inset by half_order on every axis.
template <typename Fn>
void for_each_center(const IndexRectangle& rect, int half_order, Fn&& fn) {
    const int d = rect.dim();
    std::vector<int> center(static_cast<std::size_t>(d));
    bool empty = false;
    for (int a = 0; a < d; ++a) {
        center[static_cast<std::size_t>(a)] = rect.lo[static_cast<std::size_t>(a)] + half_order;
        if (rect.lo[static_cast<std::size_t>(a)] + half_order >
            rect.hi[static_cast<std::size_t>(a)] - half_order)
            empty = true;
    }
    if (empty) return;
    while (true) {
        fn(std::span<const int>(center));
        int axis = d - 1;
        while (axis >= 0 && center[static_cast<std::size_t>(axis)] ==
                                rect.hi[static_cast<std::size_t>(axis)] - half_order) {
            center[static_cast<std::size_t>(axis)] =
                rect.lo[static_cast<std::size_t>(axis)] + half_order;
            --axis;
        }
        if (axis < 0) break;
        ++center[static_cast<std::size_t>(axis)];
    }
}

} // namespace

DifferencePatch assemble_variational(const GridFunction& gf, const VariationalConfig& cfg) {
    const int k = cfg.half_order;
    if (k < 1) fail(errc::invalid_argument, "half-order must be >= 1");
    const UniformGrid& grid = gf.grid();
    const int d = grid.dim();

    DifferencePatch patch{.rect = bounding_patch(grid, gf.mask(), k),
                          .unknown_index = gf.mask().unknown_indices(),
                          .matrix = {},
                          .rhs = {},
                          .rows = {},
                          .dropped_rows = 0,
                          .center_count = 0,
                          .half_order = k,
                          .rank_tolerance = cfg.rank_tolerance,
                          .input = gf};

    std::unordered_map<std::size_t, int> column_of;
    column_of.reserve(patch.unknown_index.size());
    for (std::size_t c = 0; c < patch.unknown_index.size(); ++c)
        column_of.emplace(patch.unknown_index[c], static_cast<int>(c));

    const DifferenceStencil stencil(k);
    const auto coeff = stencil.coefficients();

    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<double> rhs_values;
    std::vector<int> stencil_point(static_cast<std::size_t>(d));
    for_each_center(patch.rect, k, [&](std::span<const int> center) {
        ++patch.center_count;
        for (int axis = 0; axis < d; ++axis) {
            stencil_point.assign(center.begin(), center.end());
            double rhs_acc = 0.0;
            bool touches_unknown = false;
            const std::size_t first_triplet = triplets.size();
            const int row = static_cast<int>(patch.rows.size());
            for (int t = 0; t <= 2 * k; ++t) {
                stencil_point[static_cast<std::size_t>(axis)] =
                    center[static_cast<std::size_t>(axis)] + t - k;
                const std::size_t flat = grid.flatten(stencil_point);
                const auto it = column_of.find(flat);
                if (it != column_of.end()) {
                    touches_unknown = true;
                    triplets.emplace_back(row, it->second, coeff[static_cast<std::size_t>(t)]);
                } else {
                    rhs_acc -= coeff[static_cast<std::size_t>(t)] * gf.value(flat);
                }
            }
            if (touches_unknown) {
                patch.rows.push_back(
                    StencilRowRef{std::vector<int>(center.begin(), center.end()), axis});
                rhs_values.push_back(rhs_acc);
            } else {
                triplets.resize(first_triplet);
                ++patch.dropped_rows;
            }
        }
    });

    if (patch.rows.empty())
        fail(errc::degenerate_system, "no difference stencil touches an unknown point");

    patch.matrix.resize(static_cast<Eigen::Index>(patch.rows.size()),
                        static_cast<Eigen::Index>(patch.unknown_index.size()));
    patch.matrix.setFromTriplets(triplets.begin(), triplets.end());
    patch.matrix.makeCompressed();
    patch.rhs = Eigen::Map<const Eigen::VectorXd>(rhs_values.data(),
                                                  static_cast<Eigen::Index>(rhs_values.size()));
    return patch;
}

double central_difference_at(const GridFunction& gf, std::span<const int> center, int axis,
                             int half_order) {
    const DifferenceStencil stencil(half_order);
    const auto coeff = stencil.coefficients();
    std::vector<int> p(center.begin(), center.end());
    double acc = 0.0;
    for (int t = 0; t <= 2 * half_order; ++t) {
        p[static_cast<std::size_t>(axis)] = center[static_cast<std::size_t>(axis)] + t - half_order;
        acc += coeff[static_cast<std::size_t>(t)] * gf.value(p);
    }
    return acc;
}

double patch_functional(const GridFunction& gf, const IndexRectangle& rect, int half_order) {
    double acc = 0.0;
    const int d = rect.dim();
    for_each_center(rect, half_order, [&](std::span<const int> center) {
        for (int axis = 0; axis < d; ++axis) {
            const double v = central_difference_at(gf, center, axis, half_order);
            acc += v * v;
        }
    });
    return acc;
}

VariationalResult solve_variational(const DifferencePatch& patch) {
    auto problem =
        LeastSquaresProblem::sparse(patch.matrix, patch.rhs, patch.rank_tolerance);
    LsqSolution sol = lsq_solve(problem);
    if (sol.diag.rank_deficient) {
        const long nullity = static_cast<long>(patch.matrix.cols() - sol.diag.rank);
        fail(errc::non_unique_minimizer,
             "difference system is rank deficient; null-space dimension " +
                 std::to_string(nullity),
             nullity);
    }

    std::vector<double> imputed(sol.x.data(), sol.x.data() + sol.x.size());
    VariationalResult out{.completed = patch.input.with_imputed(patch.unknown_index, imputed),
                          .diag = {}};
    out.diag.cond_AtA = sol.diag.cond * sol.diag.cond;
    out.diag.rows = patch.matrix.rows();
    out.diag.cols = patch.matrix.cols();
    out.diag.affected_stencils = patch.rows.size();
    out.diag.residual_norm = sol.diag.residual_norm;
    for (const auto& row : patch.rows)
        out.diag.max_affected_diff =
            std::max(out.diag.max_affected_diff,
                     std::abs(central_difference_at(out.completed, row.center, row.axis,
                                                    patch.half_order)));
    out.diag.functional_value = patch_functional(out.completed, patch.rect, patch.half_order);
    return out;
}

AffectedStencilReport affected_stencil_report(const DifferencePatch& patch,
                                              const GridFunction& completed,
                                              const GridFunction* exact) {
    AffectedStencilReport report;
    report.affected_count = patch.rows.size();
    for (const auto& row : patch.rows)
        report.max_abs_diff =
            std::max(report.max_abs_diff,
                     std::abs(central_difference_at(completed, row.center, row.axis,
                                                    patch.half_order)));
    report.functional_completed = patch_functional(completed, patch.rect, patch.half_order);
    if (exact != nullptr)
        report.functional_exact = patch_functional(*exact, patch.rect, patch.half_order);
    return report;
}

InverseOperatorBound inverse_operator_bound(int n, int k) {
    static constexpr double kAbsEuler[] = {1.0, 1.0, 5.0, 61.0, 1385.0, 50521.0, 2702765.0};
    if (n < 1) fail(errc::invalid_argument, "matrix size must be >= 1");
    if (k < 1 || k > 6)
        fail(errc::invalid_argument, "half-order outside the tabulated range 1..6");
    double factorial = 1.0;
    for (int j = 2; j <= 2 * k; ++j) factorial *= j;
    const double np1 = static_cast<double>(n) + 1.0;
    InverseOperatorBound out;
    out.exact_bound = kAbsEuler[k] / (std::pow(2.0, 2 * k) * factorial) * std::pow(np1, 2 * k);
    out.coarse_bound = std::pow(np1 * np1 / 8.0, k);
    return out;
}

Eigen::MatrixXd difference_dirichlet_matrix(int n, int k) {
    if (n < 1 || k < 1) fail(errc::invalid_argument, "need n >= 1 and k >= 1");
    const DifferenceStencil stencil(k);
    const auto coeff = stencil.coefficients();
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t <= 2 * k; ++t) {
            const int j = i + t - k;
            if (j >= 0 && j < n) a(i, j) = sign * coeff[static_cast<std::size_t>(t)];
        }
    return a;
}

namespace {

double study_function(int dim, std::span<const double> x) {
    if (dim == 1) return std::sin(x[0] + 0.7);
    return std::sin(x[0] + 0.7) * std::cos(x[1] - 0.3);
}

} // namespace

ScalingStudy error_scaling_study(HoleScenario scenario, int half_order, int dim,
                                 double noise_amplitude, std::span<const int> mesh_sizes,
                                 std::uint64_t seed) {
    if (dim < 1 || dim > 2) fail(errc::invalid_argument, "scaling study supports dim 1 or 2");
    ScalingStudy study;
    std::vector<double> hole_center(static_cast<std::size_t>(dim), 2.0);

    for (const int n : mesh_sizes) {
        const UniformGrid grid(dim, n);
        const double h = grid.mesh_size();
        const double radius = (scenario == HoleScenario::small_hole) ? h : 0.5;

        std::vector<double> exact(grid.point_count());
        std::vector<std::uint8_t> known(grid.point_count(), 1);
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (std::size_t flat = 0; flat < exact.size(); ++flat) {
            grid.point(grid.unflatten(flat), x);
            exact[flat] = study_function(dim, x);
            double dist2 = 0.0;
            for (int j = 0; j < dim; ++j) {
                const double diff = x[static_cast<std::size_t>(j)] -
                                    hole_center[static_cast<std::size_t>(j)];
                dist2 += diff * diff;
            }
            if (dist2 <= radius * radius * (1.0 + 1e-12)) known[flat] = 0;
        }

        std::vector<double> values = exact;
        if (noise_amplitude > 0.0) {
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
            for (std::size_t flat = 0; flat < values.size(); ++flat)
                if (known[flat] != 0) values[flat] += uniform_pm(rng, noise_amplitude);
        }

        const GridFunction gf(grid, values, GridMask(known));
        const auto patch = assemble_variational(gf, {.half_order = half_order});
        const auto result = solve_variational(patch);

        double max_error = 0.0;
        for (const std::size_t flat : patch.unknown_index)
            max_error = std::max(max_error,
                                 std::abs(result.completed.value(flat) - exact[flat]));
        study.rows.push_back({n, h, max_error});
    }

    // log-log slope of error against mesh size
    const std::size_t m = study.rows.size();
    if (m >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& row : study.rows) {
            const double lx = std::log(row.mesh_size);
            const double ly = std::log(std::max(row.max_error, 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double denom = m * sxx - sx * sx;
        study.fitted_slope = (m * sxy - sx * sy) / denom;
    }
    return study;
}

} // namespace mdi
