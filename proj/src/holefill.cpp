#include "mdi/holefill.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace mdi {

namespace {

std::vector<double> all_nn_distances(const PointCloud& cloud) {
    std::vector<double> out(cloud.size());
    std::vector<double> d2;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        cloud.squared_distances(cloud.point(i), d2);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < d2.size(); ++j)
            if (j != i) best = std::min(best, d2[j]);
        out[i] = std::sqrt(best);
    }
    return out;
}

double median_spacing(const PointCloud& cloud) {
    std::vector<double> nn = all_nn_distances(cloud);
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    return nn[nn.size() / 2];
}

struct KnnGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;
};

KnnGraph build_knn_graph(const PointCloud& cloud, int k) {
    KnnGraph graph;
    graph.adjacency.resize(cloud.size());
    std::vector<double> d2;
    std::vector<std::size_t> order(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        cloud.squared_distances(cloud.point(i), d2);
        std::iota(order.begin(), order.end(), std::size_t{0});
        const std::size_t keep = std::min<std::size_t>(k + 1, order.size());
        std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                          [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
        for (std::size_t t = 0; t < keep; ++t) {
            const std::size_t j = order[t];
            if (j == i) continue;
            graph.adjacency[i].emplace_back(j, std::sqrt(d2[j]));
        }
    }
    // symmetrize
    for (std::size_t i = 0; i < graph.adjacency.size(); ++i)
        for (const auto& [j, w] : graph.adjacency[i]) {
            bool present = false;
            for (const auto& [b, bw] : graph.adjacency[j])
                if (b == i) present = true;
            if (!present) graph.adjacency[j].emplace_back(i, w);
        }
    return graph;
}

std::vector<double> graph_distances(const KnnGraph& graph, std::size_t source) {
    std::vector<double> dist(graph.adjacency.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : graph.adjacency[u])
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                queue.emplace(dist[v], v);
            }
    }
    return dist;
}

// Local tangent basis at a point from the unweighted covariance of its
// neighborhood; cheap version used only for gap detection.
Eigen::MatrixXd local_pca_basis(const PointCloud& cloud, const std::vector<std::size_t>& hood,
                                std::size_t self, int d) {
    const int n = cloud.ambient_dim();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    std::size_t count = 0;
    for (const std::size_t j : hood) {
        mean += cloud.point_vec(j);
        ++count;
    }
    mean += cloud.point_vec(self);
    mean /= static_cast<double>(count + 1);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    for (const std::size_t j : hood) {
        const Eigen::VectorXd diff = cloud.point_vec(j) - mean;
        cov.noalias() += diff * diff.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    return eig.eigenvectors().rightCols(d).rowwise().reverse();
}

struct GapFlag {
    bool boundary = false;
    Eigen::VectorXd gap_direction; // ambient unit vector into the gap
};

GapFlag directional_gap(const PointCloud& cloud, std::size_t self, double radius,
                        double angular_gap) {
    const int d = cloud.intrinsic_dim();
    GapFlag flag;
    auto hood = cloud.neighbors_within(cloud.point(self), radius);
    std::erase(hood, self);
    if (hood.size() < static_cast<std::size_t>(d) + 1) {
        flag.boundary = true;
        flag.gap_direction = Eigen::VectorXd::Zero(cloud.ambient_dim());
        return flag;
    }

    const Eigen::VectorXd q = cloud.point_vec(self);
    const Eigen::MatrixXd basis = local_pca_basis(cloud, hood, self, d);

    if (d == 2) {
        std::vector<double> angles;
        angles.reserve(hood.size());
        for (const std::size_t j : hood) {
            const Eigen::VectorXd t = basis.transpose() * (cloud.point_vec(j) - q);
            angles.push_back(std::atan2(t(1), t(0)));
        }
        std::sort(angles.begin(), angles.end());
        double widest = kTwoPi - (angles.back() - angles.front());
        double mid = angles.back() + widest / 2.0;
        for (std::size_t t = 1; t < angles.size(); ++t) {
            const double gap = angles[t] - angles[t - 1];
            if (gap > widest) {
                widest = gap;
                mid = angles[t - 1] + gap / 2.0;
            }
        }
        if (widest > angular_gap) {
            flag.boundary = true;
            flag.gap_direction = std::cos(mid) * basis.col(0) + std::sin(mid) * basis.col(1);
        }
        return flag;
    }

    // general d: flag when the neighbor directions concentrate in a half
    // space, i.e. their mean direction is long
    Eigen::VectorXd mean_dir = Eigen::VectorXd::Zero(cloud.ambient_dim());
    for (const std::size_t j : hood)
        mean_dir += (cloud.point_vec(j) - q).normalized();
    mean_dir /= static_cast<double>(hood.size());
    if (mean_dir.norm() > 0.5) {
        flag.boundary = true;
        flag.gap_direction = -mean_dir.normalized();
    }
    return flag;
}

std::vector<std::vector<std::size_t>> single_linkage_clusters(const PointCloud& cloud,
                                                              const std::vector<std::size_t>& pts,
                                                              double radius) {
    std::vector<int> parent(pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    const std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    const double r2 = radius * radius;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            const Eigen::VectorXd diff = cloud.point_vec(pts[a]) - cloud.point_vec(pts[b]);
            if (diff.squaredNorm() <= r2) parent[find(static_cast<int>(a))] =
                find(static_cast<int>(b));
        }
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<int> root_of(pts.size(), -1);
    for (std::size_t a = 0; a < pts.size(); ++a) {
        const int root = find(static_cast<int>(a));
        if (root_of[static_cast<std::size_t>(root)] < 0) {
            root_of[static_cast<std::size_t>(root)] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(root_of[static_cast<std::size_t>(root)])].push_back(
            pts[a]);
    }
    return clusters;
}

} // namespace

HoleDetection detect_hole(const PointCloud& cloud, const PipelineConfig& cfg) {
    HoleDetection out;
    if (cloud.size() < 4) return out;
    out.median_spacing = median_spacing(cloud);

    // Anisotropy-adaptive neighbor radius: scale per point by the distance
    // to the 2d-th nearest neighbor, floored at the global median spacing.
    const int k_gap = std::max(4, 2 * cloud.intrinsic_dim());
    std::vector<std::size_t> flagged;
    std::vector<Eigen::VectorXd> gap_dirs(cloud.size());
    std::vector<double> d2;
    std::vector<double> kth(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        cloud.squared_distances(cloud.point(i), d2);
        std::vector<double> copy = d2;
        const std::size_t pos = std::min<std::size_t>(k_gap, copy.size() - 1);
        std::nth_element(copy.begin(), copy.begin() + pos, copy.end());
        kth[i] = std::sqrt(copy[pos]);
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double radius = cfg.gap_radius_factor * std::max(out.median_spacing, kth[i]);
        const GapFlag flag = directional_gap(cloud, i, radius, cfg.angular_gap);
        if (flag.boundary) {
            flagged.push_back(i);
            gap_dirs[i] = flag.gap_direction;
        }
    }
    if (flagged.empty()) return out;

    const auto clusters = single_linkage_clusters(
        cloud, flagged, cfg.cluster_radius_factor * out.median_spacing);

    // A hole encircles its gap: member gap directions point toward the
    // cluster mean. The outer sampling rim points away and is discarded.
    std::vector<std::vector<std::size_t>> holes;
    for (const auto& cluster : clusters) {
        if (cluster.size() < 3) {
            out.rim_points += cluster.size();
            continue;
        }
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(cloud.ambient_dim());
        for (const std::size_t j : cluster) mean += cloud.point_vec(j);
        mean /= static_cast<double>(cluster.size());
        std::size_t inward = 0;
        for (const std::size_t j : cluster)
            if (gap_dirs[j].size() > 0 && gap_dirs[j].dot(mean - cloud.point_vec(j)) > 0.0)
                ++inward;
        if (static_cast<double>(inward) >= 0.6 * static_cast<double>(cluster.size()))
            holes.push_back(cluster);
        else
            out.rim_points += cluster.size();
    }
    if (holes.empty()) return out;

    const KnnGraph graph = build_knn_graph(cloud, cfg.knn);
    std::vector<HoleDescriptor> descriptors;
    for (const auto& cluster : holes) {
        HoleDescriptor desc;
        desc.boundary_points = cluster;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(cloud.ambient_dim());
        for (const std::size_t j : cluster) mean += cloud.point_vec(j);
        desc.center = mean / static_cast<double>(cluster.size());
        for (const std::size_t j : cluster) {
            const auto dist = graph_distances(graph, j);
            for (const std::size_t b : cluster) {
                double g = dist[b];
                if (!std::isfinite(g))
                    g = (cloud.point_vec(j) - cloud.point_vec(b)).norm();
                desc.diameter_estimate = std::max(desc.diameter_estimate, g);
            }
        }
        descriptors.push_back(std::move(desc));
    }
    std::sort(descriptors.begin(), descriptors.end(),
              [](const HoleDescriptor& a, const HoleDescriptor& b) {
                  return a.diameter_estimate > b.diameter_estimate;
              });
    out.hole = std::move(descriptors.front());
    out.others.assign(descriptors.begin() + 1, descriptors.end());
    return out;
}

double restricted_filling_distance(const PointCloud& cloud,
                                   const std::vector<Eigen::VectorXd>& region_sample) {
    if (region_sample.empty())
        fail(errc::invalid_argument, "region sample must not be empty");
    double fill = 0.0;
    std::vector<double> d2;
    for (const auto& x : region_sample) {
        cloud.squared_distances({x.data(), static_cast<std::size_t>(x.size())}, d2);
        fill = std::max(fill, std::sqrt(*std::min_element(d2.begin(), d2.end())));
    }
    return fill;
}

namespace {

// Deterministic, rigid-motion-equivariant basis of the plane: directions to
// extremal boundary points, orthonormalized inside the subspace.
Eigen::MatrixXd canonical_basis(const Eigen::MatrixXd& raw_basis, const Eigen::VectorXd& origin,
                                const PointCloud& cloud,
                                const std::vector<std::size_t>& boundary) {
    const int d = static_cast<int>(raw_basis.cols());
    const Eigen::MatrixXd projector = raw_basis * raw_basis.transpose();
    Eigen::MatrixXd basis(raw_basis.rows(), d);
    int built = 0;
    for (int round = 0; round < d; ++round) {
        double best_norm = -1.0;
        Eigen::VectorXd best;
        for (const std::size_t j : boundary) {
            Eigen::VectorXd v = projector * (cloud.point_vec(j) - origin);
            for (int c = 0; c < built; ++c) v -= basis.col(c).dot(v) * basis.col(c);
            if (v.norm() > best_norm) {
                best_norm = v.norm();
                best = v;
            }
        }
        if (best_norm <= 1e-12) break;
        basis.col(built++) = best.normalized();
    }
    if (built < d) return raw_basis; // degenerate boundary geometry
    return basis;
}

} // namespace

ReferencePlane build_reference_plane(const PointCloud& cloud, const HoleDescriptor& hole,
                                     const PipelineConfig& cfg) {
    if (hole.empty()) fail(errc::invalid_argument, "hole descriptor is empty");
    const int d = cloud.intrinsic_dim();
    const double spacing = median_spacing(cloud);
    const double frame_radius = cfg.frame_radius_factor * spacing;

    MmlsConfig frame_cfg = cfg.mmls;
    frame_cfg.neighborhood_radius = frame_radius;

    // average the tangent projectors of the boundary points
    Eigen::MatrixXd mean_projector =
        Eigen::MatrixXd::Zero(cloud.ambient_dim(), cloud.ambient_dim());
    for (const std::size_t j : hole.boundary_points) {
        const TangentFrame local = fit_local_frame(cloud, cloud.point(j), frame_cfg);
        mean_projector.noalias() += local.basis * local.basis.transpose();
    }
    mean_projector /= static_cast<double>(hole.boundary_points.size());

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mean_projector);
    const Eigen::VectorXd spectrum = eig.eigenvalues().reverse();
    if (spectrum(d - 1) < cfg.plane_stability_min)
        fail(errc::unstable_plane,
             "local tangents around the hole disagree: mean-projector eigenvalue " +
                 std::to_string(spectrum(d - 1)) + " below " +
                 std::to_string(cfg.plane_stability_min));
    Eigen::MatrixXd basis = eig.eigenvectors().rightCols(d).rowwise().reverse();

    // plane offset from the boundary neighborhoods; the plane origin is the
    // projection of the hole center onto the plane
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(cloud.ambient_dim());
    std::size_t count = 0;
    for (const std::size_t j : hole.boundary_points) {
        for (const std::size_t t : cloud.neighbors_within(cloud.point(j), 2.0 * spacing)) {
            centroid += cloud.point_vec(t);
            ++count;
        }
    }
    centroid /= static_cast<double>(count);
    const Eigen::VectorXd origin =
        centroid + basis * (basis.transpose() * (hole.center - centroid));

    basis = canonical_basis(basis, origin, cloud, hole.boundary_points);

    // probe ring just outside the hole footprint, lifted onto the manifold,
    // measures how well data surround the missing region
    MmlsConfig probe_cfg = cfg.mmls;
    if (!(probe_cfg.neighborhood_radius > 0.0)) {
        probe_cfg.neighborhood_radius = frame_radius;
        if (probe_cfg.min_neighbors <= 0)
            probe_cfg.min_neighbors =
                static_cast<int>(2 * monomial_count(probe_cfg.degree, d));
        if (!(probe_cfg.weight_scale > 0.0)) probe_cfg.weight_scale = 1.5 * spacing;
    }
    std::vector<Eigen::VectorXd> probes;
    const double hole_radius = hole.diameter_estimate / 2.0;
    for (const double scale : {1.05, 1.2, 1.35}) {
        const int n_angles = 16;
        for (int a = 0; a < n_angles; ++a) {
            Eigen::VectorXd chart = Eigen::VectorXd::Zero(d);
            if (d == 1) {
                chart(0) = (a % 2 == 0 ? 1.0 : -1.0) * scale * hole_radius;
            } else {
                const double angle = kTwoPi * a / n_angles;
                chart(0) = scale * hole_radius * std::cos(angle);
                chart(1) = scale * hole_radius * std::sin(angle);
            }
            const Eigen::VectorXd pos = origin + basis * chart;
            try {
                probes.push_back(
                    mmls_project(cloud, {pos.data(), static_cast<std::size_t>(pos.size())},
                                 probe_cfg));
            } catch (const Error&) {
                // probe outside the data reach; skip
            }
        }
    }
    const double fill =
        probes.empty() ? spacing : restricted_filling_distance(cloud, probes);

    const double edge = 2.0 * hole.diameter_estimate;
    // mesh spacing stays within [0.5, 2] fill distances
    const double multiplier = std::clamp(cfg.mesh_multiplier, 0.5, 2.0);
    const double target_spacing = multiplier * fill;
    const int mesh_n = std::max(4, static_cast<int>(std::ceil(edge / target_spacing)));
    const UniformGrid mesh(d, mesh_n, std::vector<double>(static_cast<std::size_t>(d), -edge / 2.0),
                           edge);

    return ReferencePlane{TangentFrame{origin, basis}, mesh, edge, fill, spectrum(d - 1)};
}

namespace {

struct MeshWindow {
    IndexRectangle rect;      // in mesh indices, square
    UniformGrid grid;         // sub-grid over the window
    std::vector<std::size_t> mesh_flat; // parent flat index per window flat index
};

// Square index window around the hole footprint with a (k+1)-layer margin,
// so the local difference systems ignore far-field projection failures.
MeshWindow carve_window(const UniformGrid& mesh, const std::vector<std::uint8_t>& footprint,
                        int half_order) {
    const int d = mesh.dim();
    const int n = mesh.points_per_axis();
    std::vector<int> lo(static_cast<std::size_t>(d), n), hi(static_cast<std::size_t>(d), -1);
    std::vector<int> mi(static_cast<std::size_t>(d));
    for (std::size_t flat = 0; flat < footprint.size(); ++flat) {
        if (footprint[flat] == 0) continue;
        mesh.unflatten(flat, mi);
        for (int a = 0; a < d; ++a) {
            lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], mi[static_cast<std::size_t>(a)]);
            hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], mi[static_cast<std::size_t>(a)]);
        }
    }
    if (hi[0] < 0) fail(errc::nothing_to_impute, "no mesh node falls inside the hole footprint");

    const int margin = half_order + 1;
    int extent = 0;
    for (int a = 0; a < d; ++a)
        extent = std::max(extent, hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)] + 1);
    extent += 2 * margin;
    if (extent > n)
        fail(errc::margin_violation,
             "hole footprint plus margins exceeds the chart mesh; consider enlarging the chart "
             "cube or lowering the difference order");

    IndexRectangle rect;
    rect.lo.resize(static_cast<std::size_t>(d));
    rect.hi.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        const int center2 = lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)];
        int wlo = (center2 - extent + 1) / 2;
        wlo = std::clamp(wlo, 0, n - extent);
        rect.lo[static_cast<std::size_t>(a)] = wlo;
        rect.hi[static_cast<std::size_t>(a)] = wlo + extent - 1;
    }

    std::vector<double> sub_origin(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
        sub_origin[static_cast<std::size_t>(a)] =
            mesh.box_origin()[static_cast<std::size_t>(a)] +
            mesh.mesh_size() * rect.lo[static_cast<std::size_t>(a)];
    UniformGrid sub(d, extent, std::move(sub_origin), extent * mesh.mesh_size());

    std::vector<int> local(static_cast<std::size_t>(d));
    std::vector<std::size_t> mesh_flat(sub.point_count());
    for (std::size_t flat = 0; flat < mesh_flat.size(); ++flat) {
        sub.unflatten(flat, local);
        for (int a = 0; a < d; ++a)
            local[static_cast<std::size_t>(a)] += rect.lo[static_cast<std::size_t>(a)];
        mesh_flat[flat] = mesh.flatten(local);
    }
    return MeshWindow{std::move(rect), std::move(sub), std::move(mesh_flat)};
}

} // namespace

PipelineResult fill_manifold_hole(const PointCloud& cloud, const PipelineConfig& cfg) {
    PipelineResult out;
    const HoleDetection detection = detect_hole(cloud, cfg);
    out.diag.median_spacing = detection.median_spacing;
    if (detection.hole.empty()) {
        out.no_hole = true;
        return out;
    }

    const ReferencePlane plane = build_reference_plane(cloud, detection.hole, cfg);
    out.diag.fill_distance = plane.fill_distance;
    out.diag.diameter_estimate = detection.hole.diameter_estimate;
    out.diag.diameter_to_fill_ratio = detection.hole.diameter_estimate / plane.fill_distance;
    out.diag.plane_stability = plane.plane_stability;
    out.diag.mesh_nodes = plane.mesh.point_count();

    // Hole footprint on the chart. The descriptor's diameter is the
    // graph-geodesic estimate (detours around the hole); the footprint uses
    // the ambient spread of the boundary ring, which tracks the actual rim.
    double rim_diameter = 0.0;
    for (std::size_t a = 0; a < detection.hole.boundary_points.size(); ++a)
        for (std::size_t b = a + 1; b < detection.hole.boundary_points.size(); ++b)
            rim_diameter = std::max(
                rim_diameter, (cloud.point_vec(detection.hole.boundary_points[a]) -
                               cloud.point_vec(detection.hole.boundary_points[b]))
                                  .norm());
    const double belt =
        rim_diameter / 2.0 + cfg.admissibility_multiplier * plane.fill_distance;
    const Eigen::VectorXd& plane_origin = plane.frame.origin;
    std::vector<std::uint8_t> footprint(plane.mesh.point_count(), 0);
    for (std::size_t flat = 0; flat < footprint.size(); ++flat) {
        const Eigen::VectorXd pos = mesh_node_position(plane.frame, plane.mesh, flat);
        if ((pos - plane_origin).norm() <= belt) footprint[flat] = 1;
    }

    MmlsConfig mmls_cfg = cfg.mmls;
    if (!(mmls_cfg.neighborhood_radius > 0.0)) {
        mmls_cfg.neighborhood_radius = cfg.frame_radius_factor * detection.median_spacing;
        if (mmls_cfg.min_neighbors <= 0)
            mmls_cfg.min_neighbors = static_cast<int>(
                2 * monomial_count(mmls_cfg.degree, cloud.intrinsic_dim()));
        if (!(mmls_cfg.weight_scale > 0.0))
            mmls_cfg.weight_scale = 1.5 * detection.median_spacing;
    }

    const auto admissible = [&](const Eigen::VectorXd& pos) {
        return (pos - plane_origin).norm() > belt;
    };
    const double output_reach = 2.5 * detection.median_spacing;
    std::vector<GridFunction> comps = component_functions(plane.frame, plane.mesh, cloud,
                                                          mmls_cfg, admissible, output_reach);
    const GridMask& mesh_mask = comps.front().mask();
    out.diag.admissible_nodes = mesh_mask.known_count();
    if (mesh_mask.known_count() == 0)
        fail(errc::sampling_deficiency, "no admissible mesh node produced a projection");

    const MeshWindow window = carve_window(plane.mesh, footprint, cfg.variational.half_order);
    out.diag.patch_points_per_axis = window.grid.points_per_axis();
    out.diag.patch_spacing = window.grid.mesh_size();

    // window mask: footprint nodes unknown, everything else must carry a
    // projection for the local systems to be well posed
    std::vector<std::uint8_t> window_known(window.grid.point_count(), 1);
    for (std::size_t flat = 0; flat < window.mesh_flat.size(); ++flat) {
        const std::size_t parent = window.mesh_flat[flat];
        if (footprint[parent] != 0)
            window_known[flat] = 0;
        else if (!mesh_mask.known(parent))
            fail(errc::sampling_deficiency,
                 "projection failed at a mesh node inside the imputation window; data too "
                 "sparse around the hole");
    }
    const GridMask window_mask(window_known);
    const auto window_unknown = window_mask.unknown_indices();
    out.diag.imputed_nodes = window_unknown.size();

    // impute each ambient component on the window
    std::vector<GridFunction> completed;
    completed.reserve(comps.size());
    for (std::size_t c = 0; c < comps.size(); ++c) {
        std::vector<double> values(window.grid.point_count(), 0.0);
        for (std::size_t flat = 0; flat < values.size(); ++flat)
            if (window_mask.known(flat))
                values[flat] = comps[c].value(window.mesh_flat[flat]);
        const GridFunction window_gf(window.grid, values, window_mask);
        ComponentReport report;
        GridFunction done = window_gf;
        try {
            if (cfg.backend == PipelineBackend::variational) {
                const auto patch = assemble_variational(window_gf, cfg.variational);
                auto result = solve_variational(patch);
                report.cond = result.diag.cond_AtA;
                report.residual_norm = result.diag.residual_norm;
                report.functional_value = result.diag.functional_value;
                done = std::move(result.completed);
            } else {
                const auto weights =
                    build_weights(window.grid, cfg.spectral_params, WeightScheme::hyperbolic_corner);
                auto sys = assemble_spectral(window_gf, weights);
                sys.solve_truncation = cfg.spectral_truncation;
                auto result = solve_spectral(sys);
                report.cond = result.diag.cond;
                report.residual_norm = result.diag.residual_norm;
                report.functional_value = result.diag.cost;
                done = std::move(result.completed);
            }
        } catch (const Error& e) {
            throw Error(e.code(),
                        "component " + std::to_string(c) + ": " + e.what() +
                            (e.code() == errc::margin_violation
                                 ? " (consider enlarging the chart cube)"
                                 : ""),
                        e.detail());
        }
        out.diag.components.push_back(report);
        completed.push_back(std::move(done));
    }

    // Emit the completed patch around the hole: projected (blue) nodes and
    // imputed (red) nodes of the window. Chart nodes beyond the window are
    // not part of the reconstruction and their projections degrade once the
    // plane leaves the data horizon, so they are not emitted.
    const int n = cloud.ambient_dim();
    for (std::size_t flat = 0; flat < window.grid.point_count(); ++flat) {
        Eigen::VectorXd pos(n);
        if (window_mask.known(flat)) {
            const std::size_t parent = window.mesh_flat[flat];
            for (int c = 0; c < n; ++c) pos(c) = comps[static_cast<std::size_t>(c)].value(parent);
            out.points.push_back(FilledPoint{std::move(pos), false});
        } else {
            for (int c = 0; c < n; ++c)
                pos(c) = completed[static_cast<std::size_t>(c)].value(flat);
            out.points.push_back(FilledPoint{std::move(pos), true});
        }
    }
    return out;
}

CrossSectionResult cross_section_demo(const CrossSectionSpec& spec, const VariationalConfig& cfg) {
    const CrossSectionData data = make_cross_sections(spec);
    CrossSectionResult out;
    out.skipped_levels = data.skipped_levels;
    for (const auto& section : data.sections) {
        CompletedSection done{section.level, section.grid, {}, 0.0};
        const auto unknown = section.components.front().mask().unknown_indices();
        for (const auto& comp : section.components) {
            const auto patch = assemble_variational(comp, cfg);
            done.components.push_back(solve_variational(patch).completed);
        }
        const double radius = std::abs(section.level);
        for (const std::size_t flat : unknown) {
            const double norm = std::hypot(done.components[0].value(flat),
                                           done.components[1].value(flat),
                                           done.components[2].value(flat));
            done.max_radius_error = std::max(done.max_radius_error, std::abs(norm - radius));
        }
        out.sections.push_back(std::move(done));
    }
    return out;
}

} // namespace mdi
