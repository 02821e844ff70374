#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <random>

#include "mdi/datasets.hpp"
#include "mdi/mmls.hpp"
#include "mdi/random.hpp"

using namespace mdi;

namespace {

PointCloud lattice_on_plane(int per_axis, const Eigen::Matrix3d& rot,
                            const Eigen::Vector3d& offset, double jitter = 0.0,
                            std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::vector<double> coords;
    const double spacing = 1.0 / (per_axis - 1);
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j) {
            const double u = i * spacing + jitter * spacing * uniform_pm(rng, 1.0);
            const double v = j * spacing + jitter * spacing * uniform_pm(rng, 1.0);
            const Eigen::Vector3d p = rot * Eigen::Vector3d(u, v, 0.0) + offset;
            coords.insert(coords.end(), p.data(), p.data() + 3);
        }
    return PointCloud(3, 2, std::move(coords));
}

Eigen::Matrix3d tilt() {
    return Eigen::AngleAxisd(0.6, Eigen::Vector3d(1, 2, 0.5).normalized()).toRotationMatrix();
}

} // namespace

TEST_SUITE("mmls") {

TEST_CASE("point cloud basics") {
    CHECK_THROWS_AS(PointCloud(3, 3, std::vector<double>(9, 0.0)), Error);
    CHECK_THROWS_AS(PointCloud(3, 2, std::vector<double>(8, 0.0)), Error);
    const PointCloud cloud(2, 1, {0.0, 0.0, 1.0, 0.0, 0.0, 2.0});
    CHECK(cloud.size() == 3);
    const std::vector<double> q{0.0, 0.0};
    const auto hood = cloud.neighbors_within(q, 1.5);
    CHECK(hood == std::vector<std::size_t>{0, 1});
    CHECK(monomial_count(5, 2) == 21);
    CHECK(monomial_count(2, 2) == 6);
}

TEST_CASE("frame on exact plane data") {
    const Eigen::Matrix3d rot = tilt();
    const Eigen::Vector3d offset(0.2, -0.4, 1.0);
    const PointCloud cloud = lattice_on_plane(15, rot, offset);
    MmlsConfig cfg;
    cfg.neighborhood_radius = 0.25;

    const Eigen::Vector3d x = rot * Eigen::Vector3d(0.5, 0.5, 0.0) + offset;
    FrameDiagnostics diag;
    const TangentFrame frame = fit_local_frame(cloud, {x.data(), 3}, cfg, &diag);

    // orthonormal basis spanning the data plane; residual eigenvalue ~ 0
    CHECK((frame.basis.transpose() * frame.basis - Eigen::Matrix2d::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    const Eigen::Vector3d normal = rot * Eigen::Vector3d(0, 0, 1);
    CHECK(std::abs((frame.basis.transpose() * normal).norm()) <= 1e-10);
    CHECK(diag.eigenvalues(2) <= 1e-18);
    CHECK_FALSE(diag.weak_tangent_gap);
}

TEST_CASE("frame normal on a sphere tracks the radial direction") {
    const SphereSpec spec{.samples = 4000, .seed = 3};
    const PointCloud cloud = make_sphere_cloud(spec);
    MmlsConfig cfg;
    cfg.neighborhood_radius = 0.15; // small patch near the pole
    const Eigen::Vector3d pole(0.0, 0.0, 1.0);
    const TangentFrame frame = fit_local_frame(cloud, {pole.data(), 3}, cfg);
    Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
    normal -= frame.basis * (frame.basis.transpose() * normal);
    const double angle = std::acos(std::clamp(normal.normalized().dot(pole), -1.0, 1.0));
    CHECK(angle <= 2.0 * M_PI / 180.0);
}

TEST_CASE("insufficient neighbors raise sampling deficiency") {
    const PointCloud cloud(3, 2, {0, 0, 0, 1, 0, 0});
    MmlsConfig cfg;
    cfg.neighborhood_radius = 10.0;
    const Eigen::Vector3d x(0.5, 0.0, 0.0);
    try {
        fit_local_frame(cloud, {x.data(), 3}, cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::sampling_deficiency);
    }
}

TEST_CASE("projection of an off-plane query is the orthogonal projection") {
    const Eigen::Matrix3d rot = tilt();
    const Eigen::Vector3d offset(0.1, 0.3, -0.2);
    const PointCloud cloud = lattice_on_plane(20, rot, offset, 0.2, 9);
    MmlsConfig cfg;
    cfg.degree = 1;
    cfg.neighborhood_radius = 0.2;

    const Eigen::Vector3d on_plane = rot * Eigen::Vector3d(0.45, 0.55, 0.0) + offset;
    const Eigen::Vector3d normal = rot * Eigen::Vector3d(0, 0, 1);
    const Eigen::Vector3d x = on_plane + 0.05 * normal;
    const Eigen::VectorXd projected = mmls_project(cloud, {x.data(), 3}, cfg);
    CHECK((projected - on_plane).norm() <= 1e-10);
}

TEST_CASE("sphere projection accuracy") {
    const SphereSpec spec{.samples = 5000, .seed = 3};
    const PointCloud cloud = make_sphere_cloud(spec);
    const double h = std::sqrt(4.0 * M_PI / spec.samples);
    MmlsConfig cfg;
    cfg.degree = 2;
    cfg.neighborhood_radius = 3.0 * h;
    cfg.weight_scale = 1.5 * h;
    cfg.min_neighbors = static_cast<int>(2 * monomial_count(2, 2));
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::Vector3d dir(uniform_pm(rng, 1.0), uniform_pm(rng, 1.0), uniform_pm(rng, 1.0));
        const Eigen::Vector3d x = 1.05 * dir.normalized();
        const Eigen::VectorXd projected = mmls_project(cloud, {x.data(), 3}, cfg);
        CHECK(std::abs(projected.norm() - 1.0) <= 1e-3);
    }
}

TEST_CASE("polynomial graphs are reproduced exactly") {
    // Cloud on the graph of a degree-2 polynomial over the xy-plane. The
    // exactness hypothesis needs the fitted frame to coincide with the base
    // hyperplane, so the graph is kept shallow (a steep graph tilts the
    // frame and the reparametrized data are no longer polynomial).
    std::vector<double> coords;
    const int per_axis = 18;
    const auto poly = [](double u, double v) {
        return 0.06 * u * u - 0.04 * u * v + 0.03 * v * v + 0.02 * u - 0.01 * v + 0.4;
    };
    for (int i = 0; i < per_axis; ++i)
        for (int j = 0; j < per_axis; ++j) {
            const double u = static_cast<double>(i) / (per_axis - 1);
            const double v = static_cast<double>(j) / (per_axis - 1);
            coords.insert(coords.end(), {u, v, poly(u, v)});
        }
    const PointCloud cloud(3, 2, std::move(coords));
    MmlsConfig cfg;
    cfg.degree = 2;
    cfg.neighborhood_radius = 0.25;
    for (const auto [u, v] : {std::pair{0.5, 0.5}, std::pair{0.31, 0.62}}) {
        const Eigen::Vector3d x(u, v, poly(u, v));
        const Eigen::VectorXd projected = mmls_project(cloud, {x.data(), 3}, cfg);
        CHECK((projected - x).norm() <= 1e-8);
    }
}

TEST_CASE("degenerate fits raise with the monomial count") {
    const PointCloud cloud = lattice_on_plane(3, Eigen::Matrix3d::Identity(),
                                              Eigen::Vector3d::Zero());
    MmlsConfig cfg;
    cfg.degree = 4; // 15 monomials, 9 samples
    cfg.neighborhood_radius = 5.0;
    const Eigen::Vector3d x(0.5, 0.5, 0.0);
    try {
        mmls_project(cloud, {x.data(), 3}, cfg);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::fit_degeneracy);
        CHECK(e.detail() == 15);
    }
}

TEST_CASE("rigid-motion equivariance") {
    const SphereSpec spec{.samples = 1500, .seed = 6};
    const PointCloud cloud = make_sphere_cloud(spec);
    const double h = std::sqrt(4.0 * M_PI / spec.samples);
    MmlsConfig cfg;
    cfg.degree = 2;
    cfg.neighborhood_radius = 3.0 * h;
    cfg.weight_scale = 1.5 * h;
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::Vector3d axis(uniform_pm(rng, 1.0), uniform_pm(rng, 1.0), uniform_pm(rng, 1.0));
        const Eigen::Matrix3d rot =
            Eigen::AngleAxisd(kTwoPi * uniform01(rng), axis.normalized()).toRotationMatrix();
        const Eigen::Vector3d shift(uniform_pm(rng, 1.0), uniform_pm(rng, 1.0),
                                    uniform_pm(rng, 1.0));
        std::vector<double> moved(cloud.coords().begin(), cloud.coords().end());
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const Eigen::Vector3d p = rot * cloud.point_vec(i) + shift;
            for (int j = 0; j < 3; ++j) moved[3 * i + static_cast<std::size_t>(j)] = p(j);
        }
        const PointCloud moved_cloud(3, 2, moved);

        Eigen::Vector3d q(uniform_pm(rng, 1.0), uniform_pm(rng, 1.0), uniform_pm(rng, 1.0));
        q = 1.04 * q.normalized();
        const Eigen::VectorXd direct = mmls_project(cloud, {q.data(), 3}, cfg);
        const Eigen::Vector3d mq = rot * q + shift;
        const Eigen::VectorXd via = mmls_project(moved_cloud, {mq.data(), 3}, cfg);
        CHECK((via - (rot * Eigen::Vector3d(direct) + shift)).norm() <= 1e-8);
    }
}

TEST_CASE("component sweep over a chart mesh") {
    const Eigen::Matrix3d rot = tilt();
    const Eigen::Vector3d offset(0.0, 0.0, 0.5);
    const PointCloud cloud = lattice_on_plane(25, rot, offset, 0.25, 4);
    MmlsConfig cfg;
    cfg.degree = 1;
    cfg.neighborhood_radius = 0.15;

    TangentFrame frame{rot * Eigen::Vector3d(0.5, 0.5, 0.0) + offset, rot.leftCols(2)};
    const UniformGrid mesh(2, 8, {-0.2, -0.2}, 0.4);

    SUBCASE("flat data gives affine components") {
        const auto comps = component_functions(frame, mesh, cloud, cfg, nullptr);
        REQUIRE(comps.size() == 3);
        CHECK(comps[0].mask().known_count() == mesh.point_count());
        // affine in mesh coordinates: second differences vanish
        for (const auto& comp : comps)
            for (int i = 1; i < 7; ++i) {
                const std::vector<int> a{i - 1, 3}, b{i, 3}, c{i + 1, 3};
                CHECK(std::abs(comp.value(a) - 2.0 * comp.value(b) + comp.value(c)) <= 1e-9);
            }
    }
    SUBCASE("all nodes inadmissible gives a fully unknown grid") {
        const auto comps = component_functions(frame, mesh, cloud, cfg,
                                               [](const Eigen::VectorXd&) { return false; });
        CHECK(comps[0].mask().known_count() == 0);
    }
    SUBCASE("projection failures are masked, not fatal") {
        MmlsConfig tiny = cfg;
        tiny.neighborhood_radius = 1e-4; // nothing in range anywhere
        const auto comps = component_functions(frame, mesh, cloud, tiny, nullptr);
        CHECK(comps[0].mask().known_count() == 0);
    }
}

} // TEST_SUITE
