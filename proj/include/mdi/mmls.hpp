#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mdi/grid.hpp"

namespace mdi {

// Scattered points in R^n sampled from a d-dimensional manifold (d < n).
class PointCloud {
public:
    PointCloud(int ambient_dim, int intrinsic_dim, std::vector<double> coords);

    int ambient_dim() const { return ambient_dim_; }
    int intrinsic_dim() const { return intrinsic_dim_; }
    std::size_t size() const { return coords_.size() / static_cast<std::size_t>(ambient_dim_); }
    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(ambient_dim_),
                static_cast<std::size_t>(ambient_dim_)};
    }
    Eigen::VectorXd point_vec(std::size_t i) const;
    std::span<const double> coords() const { return coords_; }

    // indices of points with squared distance <= radius^2 from the query
    std::vector<std::size_t> neighbors_within(std::span<const double> query, double radius) const;
    // squared distance from the query to every point
    void squared_distances(std::span<const double> query, std::vector<double>& out) const;

private:
    int ambient_dim_;
    int intrinsic_dim_;
    std::vector<double> coords_;
};

struct MmlsConfig {
    int degree = 2;                   // total degree of the local polynomial
    double neighborhood_radius = 0.0; // weight support rho (> 0 at call time)
    double weight_scale = 0.0;        // Gaussian sigma; 0 = rho / 2
    int max_iterations = 30;
    double frame_tolerance = 1e-12;
    double eigen_gap_tolerance = 1e-8; // weak-tangent warning threshold
    // when > 0, rho grows by 1.3x (at most radius_growth_steps times) until
    // the support ball holds this many points; keeps degree-m fits fed on
    // anisotropic samplings without a global radius bump
    int min_neighbors = 0;
    int radius_growth_steps = 6;
};

struct TangentFrame {
    Eigen::VectorXd origin;
    Eigen::MatrixXd basis; // ambient_dim x intrinsic_dim, orthonormal columns
};

struct FrameDiagnostics {
    Eigen::VectorXd eigenvalues; // weighted covariance spectrum, descending
    bool weak_tangent_gap = false;
    int iterations = 0;
    std::size_t neighbor_count = 0;
    double fit_residual = 0.0;   // weighted RMS residual of the polynomial fit,
                                 // relative to the neighborhood radius
    double origin_gap = 0.0;     // widest angular sector around the origin with
                                 // no neighbors (surfaces only)
};

// Weighted local affine fit iterated until the query's projection onto the
// fitted subspace is the subspace origin. Gaussian weights about the moving
// origin, truncated at neighborhood_radius.
TangentFrame fit_local_frame(const PointCloud& cloud, std::span<const double> query,
                             const MmlsConfig& cfg, FrameDiagnostics* diag = nullptr);

// Local polynomial fit over the tangent frame evaluated at the frame origin:
// the projection of the query onto the approximated manifold.
Eigen::VectorXd mmls_project(const PointCloud& cloud, std::span<const double> query,
                             const MmlsConfig& cfg, FrameDiagnostics* frame_diag = nullptr);

// Sweeps the mesh (a chart grid on the frame), projecting each admissible
// node; each ambient coordinate becomes one grid function on the mesh.
// Projection failures mark the node unknown instead of aborting. When
// output_reach > 0, a projected point farther than that from every sample is
// treated as an extrapolation artifact and masked as well.
std::vector<GridFunction> component_functions(
    const TangentFrame& frame, const UniformGrid& mesh, const PointCloud& cloud,
    const MmlsConfig& cfg,
    const std::function<bool(const Eigen::VectorXd& plane_point)>& admissible,
    double output_reach = 0.0);

// chart coordinates of mesh node -> ambient point on the frame plane
Eigen::VectorXd mesh_node_position(const TangentFrame& frame, const UniformGrid& mesh,
                                   std::size_t flat);

std::size_t monomial_count(int degree, int dim);

} // namespace mdi
