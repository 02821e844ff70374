#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdi/grid.hpp"

namespace mdi {

struct VariationalConfig {
    int half_order = 3; // the functional penalizes order-2k central differences
    double rank_tolerance = 1e-12;
};

struct StencilRowRef {
    std::vector<int> center;
    int axis = 0;
};

// Sparse least-squares system for the unknown values on a margin-padded
// rectangle: one row per (center, axis) pair whose stencil touches an
// unknown point; purely-known rows are constants and get dropped.
struct DifferencePatch {
    IndexRectangle rect;
    std::vector<std::size_t> unknown_index; // flat grid index per column
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    std::vector<StencilRowRef> rows; // the affected stencil set
    std::size_t dropped_rows = 0;
    std::size_t center_count = 0; // candidate centers in the rectangle inset
    int half_order = 1;
    double rank_tolerance = 1e-12;
    GridFunction input;
};

DifferencePatch assemble_variational(const GridFunction& gf, const VariationalConfig& cfg);

struct VariationalDiagnostics {
    double cond_AtA = 0.0; // cond(A)^2 from the orthogonal factorization
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::size_t affected_stencils = 0;
    double max_affected_diff = 0.0;
    double functional_value = 0.0; // full functional including dropped rows
    double residual_norm = 0.0;
};

struct VariationalResult {
    GridFunction completed;
    VariationalDiagnostics diag;
};

// Throws non_unique_minimizer (detail = null-space dimension) when the
// system is column-rank deficient at tolerance.
VariationalResult solve_variational(const DifferencePatch& patch);

struct AffectedStencilReport {
    std::size_t affected_count = 0;
    double max_abs_diff = 0.0;
    double functional_completed = 0.0;
    std::optional<double> functional_exact;
};

AffectedStencilReport affected_stencil_report(const DifferencePatch& patch,
                                              const GridFunction& completed,
                                              const GridFunction* exact = nullptr);

// Order-2k difference of the (fully known) grid function along one axis.
double central_difference_at(const GridFunction& gf, std::span<const int> center, int axis,
                             int half_order);

// Full functional value over the rectangle's half_order-inset centers.
double patch_functional(const GridFunction& gf, const IndexRectangle& rect, int half_order);

struct InverseOperatorBound {
    double exact_bound = 0.0;  // |E_2k| / (2^{2k} (2k)!) * (n+1)^{2k}
    double coarse_bound = 0.0; // ((n+1)^2 / 8)^k
};

InverseOperatorBound inverse_operator_bound(int n, int k);

// Dirichlet-type matrix of the order-2k centered difference with zero
// exterior values, sign-flipped to be positive definite.
Eigen::MatrixXd difference_dirichlet_matrix(int n, int k);

enum class HoleScenario { small_hole, large_hole };

struct ScalingRow {
    int points_per_axis = 0;
    double mesh_size = 0.0;
    double max_error = 0.0;
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    double fitted_slope = 0.0; // log-log slope of max_error against mesh_size
};

// Refinement study on analytic data: small holes scale with the mesh
// (diameter 2h), large holes have fixed physical diameter 1.
ScalingStudy error_scaling_study(HoleScenario scenario, int half_order, int dim,
                                 double noise_amplitude, std::span<const int> mesh_sizes,
                                 std::uint64_t seed);

} // namespace mdi
