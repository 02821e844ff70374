#include "mdi/datasets.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "mdi/random.hpp"

namespace mdi {

double sample_surface_function(double x, double y) {
    return 1.0 / (2.5 + std::sin(x + 1.2) + std::cos(y));
}

GridFunction make_annulus_grid(const AnnulusGridSpec& spec, std::vector<double>* exact_values) {
    const UniformGrid grid(2, spec.points_per_axis);
    const double cx = M_PI, cy = M_PI;
    std::vector<double> values(grid.point_count(), 0.0);
    std::vector<std::uint8_t> known(grid.point_count(), 0);
    std::vector<double> exact(grid.point_count(), 0.0);
    std::vector<double> x(2);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        grid.point(grid.unflatten(flat), x);
        exact[flat] = sample_surface_function(x[0], x[1]);
        const double r = std::hypot(x[0] - cx, x[1] - cy);
        if (r >= spec.hole_radius && r <= spec.outer_radius) known[flat] = 1;
    }
    std::mt19937_64 rng(spec.seed);
    for (std::size_t flat = 0; flat < values.size(); ++flat)
        if (known[flat] != 0)
            values[flat] = exact[flat] + uniform_pm(rng, spec.noise_amplitude);
    if (exact_values != nullptr) *exact_values = std::move(exact);
    return GridFunction(grid, std::move(values), GridMask(std::move(known)));
}

GridFunction make_disk_grid(const DiskGridSpec& spec, std::vector<double>* exact_values) {
    const UniformGrid grid(2, spec.points_per_axis);
    const double cx = M_PI, cy = M_PI;
    std::vector<double> values(grid.point_count(), 0.0);
    std::vector<std::uint8_t> known(grid.point_count(), 1);
    std::vector<double> exact(grid.point_count(), 0.0);
    std::vector<double> x(2);
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        grid.point(grid.unflatten(flat), x);
        exact[flat] = sample_surface_function(x[0], x[1]);
        if (std::hypot(x[0] - cx, x[1] - cy) < spec.hole_radius) known[flat] = 0;
    }
    std::mt19937_64 rng(spec.seed);
    for (std::size_t flat = 0; flat < values.size(); ++flat)
        if (known[flat] != 0)
            values[flat] = exact[flat] + uniform_pm(rng, spec.noise_amplitude);
    if (exact_values != nullptr) *exact_values = std::move(exact);
    return GridFunction(grid, std::move(values), GridMask(std::move(known)));
}

Eigen::Vector3d torus_point(const TorusSpec& spec, double ring_angle, double tube_angle) {
    const double r = spec.tube_radius + spec.tube_variation * std::cos(spec.lobes * ring_angle);
    const double w = spec.ring_radius + r * std::cos(tube_angle);
    return {w * std::cos(ring_angle), w * std::sin(ring_angle), r * std::sin(tube_angle)};
}

Eigen::Vector3d torus_cap_center(const TorusSpec& spec) {
    return torus_point(spec, spec.cap_ring_angle, spec.cap_tube_angle);
}

PointCloud make_torus_cloud(const TorusSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const Eigen::Vector3d cap = torus_cap_center(spec);
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(spec.samples_along_ring) *
                   static_cast<std::size_t>(spec.samples_around_tube) * 3);
    const double da = kTwoPi / spec.samples_along_ring;
    const double db = kTwoPi / spec.samples_around_tube;
    for (int i = 0; i < spec.samples_along_ring; ++i) {
        for (int j = 0; j < spec.samples_around_tube; ++j) {
            const double a = (i + spec.jitter * (2.0 * uniform01(rng) - 1.0)) * da;
            const double b = (j + spec.jitter * (2.0 * uniform01(rng) - 1.0)) * db;
            const Eigen::Vector3d p = torus_point(spec, a, b);
            if (spec.cap_radius > 0.0 && (p - cap).norm() < spec.cap_radius) continue;
            coords.insert(coords.end(), p.data(), p.data() + 3);
        }
    }
    return PointCloud(3, 2, std::move(coords));
}

namespace {

double refine_surface_distance(std::span<const double> p, double a0, double b0, double step_a,
                               double step_b,
                               const std::function<Eigen::Vector3d(double, double)>& surf) {
    const Eigen::Map<const Eigen::Vector3d> q(p.data());
    double best_a = a0, best_b = b0;
    double best = (surf(a0, b0) - q).norm();
    for (int level = 0; level < 40; ++level) {
        bool improved = false;
        for (int ia = -2; ia <= 2; ++ia)
            for (int ib = -2; ib <= 2; ++ib) {
                const double a = best_a + ia * step_a;
                const double b = best_b + ib * step_b;
                const double dist = (surf(a, b) - q).norm();
                if (dist < best) {
                    best = dist;
                    best_a = a;
                    best_b = b;
                    improved = true;
                }
            }
        if (!improved) {
            step_a *= 0.35;
            step_b *= 0.35;
            if (step_a < 1e-13 && step_b < 1e-13) break;
        }
    }
    return best;
}

} // namespace

double torus_surface_distance(const TorusSpec& spec, std::span<const double> p) {
    const auto surf = [&](double a, double b) { return torus_point(spec, a, b); };
    const Eigen::Map<const Eigen::Vector3d> q(p.data());
    double best = 1e300, best_a = 0, best_b = 0;
    const int na = 96, nb = 48;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const double a = i * kTwoPi / na, b = j * kTwoPi / nb;
            const double dist = (surf(a, b) - q).norm();
            if (dist < best) {
                best = dist;
                best_a = a;
                best_b = b;
            }
        }
    return refine_surface_distance(p, best_a, best_b, kTwoPi / na, kTwoPi / nb, surf);
}

PointCloud make_sphere_cloud(const SphereSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    const Eigen::Vector3d cap_dir(std::sin(spec.cap_polar) * std::cos(spec.cap_azimuth),
                                  std::sin(spec.cap_polar) * std::sin(spec.cap_azimuth),
                                  std::cos(spec.cap_polar));
    const double spacing = std::sqrt(4.0 * M_PI / spec.samples) * spec.radius;
    std::vector<double> coords;
    coords.reserve(static_cast<std::size_t>(spec.samples) * 3);
    for (int i = 0; i < spec.samples; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / spec.samples;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double az = golden * i;
        Eigen::Vector3d p(rad * std::cos(az), rad * std::sin(az), z);
        if (spec.jitter > 0.0) {
            Eigen::Vector3d noise(uniform_pm(rng, 1.0), uniform_pm(rng, 1.0),
                                  uniform_pm(rng, 1.0));
            noise -= noise.dot(p) * p; // keep the jitter tangential
            p = (p + spec.jitter * spacing * noise).normalized();
        }
        if (spec.cap_radius > 0.0 &&
            spec.radius * std::acos(std::clamp(p.dot(cap_dir), -1.0, 1.0)) < spec.cap_radius)
            continue;
        p *= spec.radius;
        coords.insert(coords.end(), p.data(), p.data() + 3);
    }
    return PointCloud(3, 2, std::move(coords));
}

double sphere_surface_distance(const SphereSpec& spec, std::span<const double> p) {
    const Eigen::Map<const Eigen::Vector3d> q(p.data());
    return std::abs(q.norm() - spec.radius);
}

namespace {

// fixed embedding used by the plane dataset: rotate the unit square patch
// out of the xy-plane and shift it
Eigen::Matrix3d plane_rotation() {
    const double c1 = std::cos(0.4), s1 = std::sin(0.4);
    const double c2 = std::cos(-0.7), s2 = std::sin(-0.7);
    Eigen::Matrix3d rx, rz;
    rx << 1, 0, 0, 0, c1, -s1, 0, s1, c1;
    rz << c2, -s2, 0, s2, c2, 0, 0, 0, 1;
    return rz * rx;
}

const Eigen::Vector3d kPlaneOffset(0.3, -0.2, 0.5);

} // namespace

PointCloud make_plane_cloud(const PlaneSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const Eigen::Matrix3d rot = spec.embed_tilted ? plane_rotation()
                                                  : Eigen::Matrix3d::Identity();
    const Eigen::Vector3d off = spec.embed_tilted ? kPlaneOffset : Eigen::Vector3d::Zero();
    const double spacing = 1.0 / (spec.samples_per_axis - 1);
    std::vector<double> coords;
    for (int i = 0; i < spec.samples_per_axis; ++i)
        for (int j = 0; j < spec.samples_per_axis; ++j) {
            double u = i * spacing + spec.jitter * spacing * uniform_pm(rng, 1.0);
            double v = j * spacing + spec.jitter * spacing * uniform_pm(rng, 1.0);
            if (spec.hole_radius > 0.0 &&
                std::hypot(u - 0.5, v - 0.5) < spec.hole_radius)
                continue;
            const Eigen::Vector3d p = rot * Eigen::Vector3d(u, v, 0.0) + off;
            coords.insert(coords.end(), p.data(), p.data() + 3);
        }
    return PointCloud(3, 2, std::move(coords));
}

double plane_surface_distance(const PlaneSpec& spec, std::span<const double> p) {
    const Eigen::Map<const Eigen::Vector3d> q(p.data());
    if (!spec.embed_tilted) return std::abs(q.z());
    const Eigen::Vector3d normal = plane_rotation() * Eigen::Vector3d(0, 0, 1);
    return std::abs(normal.dot(q - kPlaneOffset));
}

CrossSectionData make_cross_sections(const CrossSectionSpec& spec) {
    CrossSectionData out;
    std::mt19937_64 rng(spec.seed);
    for (const double level : spec.levels) {
        const double radius = std::abs(level);
        if (radius < 1e-12) {
            out.skipped_levels.push_back(level); // the section degenerates to a point
            continue;
        }
        // angular patch around the equator, parametrized by (polar, azimuth)
        const double width = 2.0 * spec.patch_half_width;
        const UniformGrid grid(2, spec.points_per_axis,
                               {M_PI / 2.0 - spec.patch_half_width,
                                M_PI / 2.0 - spec.patch_half_width},
                               width);
        std::vector<std::uint8_t> known(grid.point_count(), 1);
        std::vector<std::vector<double>> comps(3, std::vector<double>(grid.point_count(), 0.0));
        std::vector<double> angles(2);
        const double c0 = M_PI / 2.0 - spec.patch_half_width + width / 2.0;
        for (std::size_t flat = 0; flat < known.size(); ++flat) {
            grid.point(grid.unflatten(flat), angles);
            const double theta = angles[0], phi = angles[1];
            if (std::hypot(theta - c0, phi - c0) < spec.hole_radius) known[flat] = 0;
            comps[0][flat] = radius * std::sin(theta) * std::cos(phi);
            comps[1][flat] = radius * std::sin(theta) * std::sin(phi);
            comps[2][flat] = radius * std::cos(theta);
            if (known[flat] != 0 && spec.noise_amplitude > 0.0)
                for (auto& comp : comps) comp[flat] += uniform_pm(rng, spec.noise_amplitude);
        }
        CrossSection section{level, grid, {}};
        const GridMask mask(known);
        for (auto& comp : comps) section.components.emplace_back(grid, std::move(comp), mask);
        out.sections.push_back(std::move(section));
    }
    return out;
}

} // namespace mdi
