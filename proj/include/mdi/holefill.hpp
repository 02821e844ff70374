#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "mdi/datasets.hpp"
#include "mdi/mmls.hpp"
#include "mdi/spectral.hpp"
#include "mdi/variational.hpp"

namespace mdi {

struct HoleDescriptor {
    std::vector<std::size_t> boundary_points;
    Eigen::VectorXd center;           // mean of the boundary points
    double diameter_estimate = 0.0;   // graph-geodesic max pairwise distance
    double fill_distance = 0.0;       // set by the pipeline once probes exist

    bool empty() const { return boundary_points.empty(); }
};

enum class PipelineBackend { variational, spectral };

struct PipelineConfig {
    MmlsConfig mmls{.degree = 5};
    VariationalConfig variational{.half_order = 3};
    PipelineBackend backend = PipelineBackend::variational;
    DecayParams spectral_params{};        // spectral back-end mask parameters
    double spectral_truncation = 1e-6;    // TSVD regularization for that back-end

    double gap_radius_factor = 2.0;       // neighbor radius for gap detection, x median spacing
    double angular_gap = M_PI / 2.0;      // boundary flag threshold for surfaces
    double cluster_radius_factor = 3.0;   // single-linkage radius, x median spacing
    int knn = 8;                          // graph degree for geodesic estimates
    double frame_radius_factor = 3.0;     // local tangent fit radius, x median spacing
    double plane_stability_min = 0.6;     // smallest acceptable mean-projector eigenvalue
    double mesh_multiplier = 1.0;         // mesh spacing = multiplier * fill distance
    double admissibility_multiplier = 1.0;
};

struct HoleDetection {
    HoleDescriptor hole;                      // largest hole-like gap (empty if none)
    std::vector<HoleDescriptor> others;       // further hole-like gaps
    std::size_t rim_points = 0;               // boundary flags attributed to the sampling rim
    double median_spacing = 0.0;
};

HoleDetection detect_hole(const PointCloud& cloud, const PipelineConfig& cfg);

// max over region samples of the distance to the nearest cloud point
double restricted_filling_distance(const PointCloud& cloud,
                                   const std::vector<Eigen::VectorXd>& region_sample);

struct ReferencePlane {
    TangentFrame frame;        // origin = projection of the hole center
    UniformGrid mesh;          // chart grid on the plane, centered at the origin
    double cube_edge = 0.0;    // 2 * diameter estimate
    double fill_distance = 0.0;
    double plane_stability = 0.0; // smallest retained mean-projector eigenvalue
};

ReferencePlane build_reference_plane(const PointCloud& cloud, const HoleDescriptor& hole,
                                     const PipelineConfig& cfg);

struct ComponentReport {
    double cond = 0.0;          // cond(A^T A) for the variational back-end, cond(A) spectral
    double residual_norm = 0.0;
    double functional_value = 0.0;
};

struct PipelineDiagnostics {
    // the emitted patch is the window grid, points in row-major order
    int patch_points_per_axis = 0;
    double patch_spacing = 0.0;
    double median_spacing = 0.0;
    double fill_distance = 0.0;
    double diameter_estimate = 0.0;
    double diameter_to_fill_ratio = 0.0;
    double plane_stability = 0.0;
    std::size_t mesh_nodes = 0;
    std::size_t admissible_nodes = 0;
    std::size_t imputed_nodes = 0;
    std::vector<ComponentReport> components;
};

struct FilledPoint {
    Eigen::VectorXd position;
    bool imputed = false;
};

struct PipelineResult {
    bool no_hole = false;
    std::vector<FilledPoint> points;
    PipelineDiagnostics diag;
};

PipelineResult fill_manifold_hole(const PointCloud& cloud, const PipelineConfig& cfg);

struct CompletedSection {
    double level = 0.0;
    UniformGrid grid;
    std::vector<GridFunction> components; // completed ambient coordinates
    double max_radius_error = 0.0;        // vs the analytic section radius |level|
};

struct CrossSectionResult {
    std::vector<CompletedSection> sections;
    std::vector<double> skipped_levels;
};

// Grid-structured cross-sections of the R^4 cone dataset: per-section 2D
// variational imputation of each ambient component.
CrossSectionResult cross_section_demo(const CrossSectionSpec& spec,
                                      const VariationalConfig& cfg = {.half_order = 2});

} // namespace mdi
