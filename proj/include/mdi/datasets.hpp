#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mdi/grid.hpp"
#include "mdi/mmls.hpp"

namespace mdi {

// test function of the grid experiments
double sample_surface_function(double x, double y);

struct AnnulusGridSpec {
    int points_per_axis = 50;
    double outer_radius = M_PI / 2.0;
    double hole_radius = 0.8;
    double noise_amplitude = 0.1;
    std::uint64_t seed = 1;
};

// Known values on the annulus ring, unknown inside the hole and outside the
// ring; exact (noise-free) values returned separately when requested.
GridFunction make_annulus_grid(const AnnulusGridSpec& spec,
                               std::vector<double>* exact_values = nullptr);

struct DiskGridSpec {
    int points_per_axis = 40;
    double hole_radius = 0.5;
    double noise_amplitude = 0.01;
    std::uint64_t seed = 1;
};

// Fully known grid except a disk-shaped hole at the box center.
GridFunction make_disk_grid(const DiskGridSpec& spec, std::vector<double>* exact_values = nullptr);

// Defaults are the bundled benchmark torus: r(a) = tube_radius +
// tube_variation * cos(lobes * a) around a ring of radius ring_radius,
// sampled on a jittered 84 x 34 lattice (~2800 points) with a spherical-cap
// deletion of ambient radius cap_radius (about 1.7 sampling spacings).
struct TorusSpec {
    double ring_radius = 0.2;
    double tube_radius = 0.1;
    double tube_variation = 0.01;
    int lobes = 3;
    int samples_along_ring = 84;   // counts roughly match the ring/tube arc lengths
    int samples_around_tube = 34;
    double jitter = 0.3;           // fraction of the lattice spacing
    double cap_radius = 0.0285;    // 0 = closed surface, no hole
    double cap_ring_angle = 1.2;   // cap center parameters
    double cap_tube_angle = 0.7;
    std::uint64_t seed = 11;
};

Eigen::Vector3d torus_point(const TorusSpec& spec, double ring_angle, double tube_angle);
Eigen::Vector3d torus_cap_center(const TorusSpec& spec);
PointCloud make_torus_cloud(const TorusSpec& spec);
// distance from an ambient point to the torus surface (coarse scan + local
// refinement; accurate to ~1e-10 for points near the surface)
double torus_surface_distance(const TorusSpec& spec, std::span<const double> p);

struct SphereSpec {
    double radius = 1.0;
    int samples = 2000;          // Fibonacci lattice
    double cap_radius = 0.0;     // geodesic radius of the deleted cap
    double cap_polar = 0.0;      // cap center direction
    double cap_azimuth = 0.0;
    double jitter = 0.0;         // tangential jitter as a fraction of spacing
    std::uint64_t seed = 1;
};

PointCloud make_sphere_cloud(const SphereSpec& spec);
double sphere_surface_distance(const SphereSpec& spec, std::span<const double> p);

struct PlaneSpec {
    int samples_per_axis = 40;   // jittered lattice on a unit square patch
    double jitter = 0.3;
    double hole_radius = 0.15;   // circular hole at the patch center, 0 = none
    std::uint64_t seed = 1;
    bool embed_tilted = true;    // apply a fixed rotation + offset in R^3
};

PointCloud make_plane_cloud(const PlaneSpec& spec);
double plane_surface_distance(const PlaneSpec& spec, std::span<const double> p);

struct CrossSectionSpec {
    std::vector<double> levels{0.6, 0.8, 1.0, 1.2}; // fixed fourth-coordinate values
    int points_per_axis = 24;                       // angular patch grid per section
    double patch_half_width = 0.5;                  // angle range around the equator
    double hole_radius = 0.18;                      // in angle coordinates
    double noise_amplitude = 0.0;
    std::uint64_t seed = 1;
};

struct CrossSection {
    double level = 0.0;
    UniformGrid grid;                    // angular parameter grid
    std::vector<GridFunction> components; // 3 ambient coordinate functions with a shared mask
};

// Cross-sections of the cone x1^2+x2^2+x3^2 = x4^2 at fixed x4: spheres of
// radius |x4| parametrized over an angular patch, sharing one missing region.
// Degenerate levels (|x4| ~ 0) are skipped and reported.
struct CrossSectionData {
    std::vector<CrossSection> sections;
    std::vector<double> skipped_levels;
};

CrossSectionData make_cross_sections(const CrossSectionSpec& spec);

} // namespace mdi
