#include "mdi/mmls.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdi/kernels.hpp"

namespace mdi {

PointCloud::PointCloud(int ambient_dim, int intrinsic_dim, std::vector<double> coords)
    : ambient_dim_(ambient_dim), intrinsic_dim_(intrinsic_dim), coords_(std::move(coords)) {
    if (ambient_dim_ < 1) fail(errc::invalid_argument, "ambient dimension must be >= 1");
    if (intrinsic_dim_ < 1 || intrinsic_dim_ >= ambient_dim_)
        fail(errc::invalid_argument, "intrinsic dimension must satisfy 1 <= d < n");
    if (coords_.size() % static_cast<std::size_t>(ambient_dim_) != 0)
        fail(errc::invalid_argument, "coordinate array length is not a multiple of the dimension");
    for (const double v : coords_)
        if (!std::isfinite(v)) fail(errc::invalid_argument, "point coordinate is not finite");
}

Eigen::VectorXd PointCloud::point_vec(std::size_t i) const {
    const auto p = point(i);
    return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

void PointCloud::squared_distances(std::span<const double> query, std::vector<double>& out) const {
    out.resize(size());
    kernels::sq_dist_batch(coords_.data(), size(), static_cast<std::size_t>(ambient_dim_),
                           query.data(), out.data());
}

std::vector<std::size_t> PointCloud::neighbors_within(std::span<const double> query,
                                                      double radius) const {
    std::vector<double> d2;
    squared_distances(query, d2);
    std::vector<std::size_t> out;
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < d2.size(); ++i)
        if (d2[i] <= r2) out.push_back(i);
    return out;
}

std::size_t monomial_count(int degree, int dim) {
    // C(degree + dim, dim)
    std::size_t num = 1, den = 1;
    for (int j = 1; j <= dim; ++j) {
        num *= static_cast<std::size_t>(degree + j);
        den *= static_cast<std::size_t>(j);
    }
    return num / den;
}

namespace {

struct WeightedNeighborhood {
    std::vector<std::size_t> index;
    std::vector<double> weight;
};

WeightedNeighborhood gather(const PointCloud& cloud, const Eigen::VectorXd& center, double rho,
                            double sigma) {
    WeightedNeighborhood out;
    std::vector<double> d2;
    cloud.squared_distances({center.data(), static_cast<std::size_t>(center.size())}, d2);
    const double r2 = rho * rho;
    const double inv_s2 = 1.0 / (sigma * sigma);
    for (std::size_t i = 0; i < d2.size(); ++i) {
        if (d2[i] > r2) continue;
        out.index.push_back(i);
        out.weight.push_back(std::exp(-d2[i] * inv_s2));
    }
    return out;
}

// rho (and sigma with it) grow geometrically until the ball carries
// min_neighbors points or the growth budget runs out
std::pair<double, double> effective_radius(const PointCloud& cloud, const Eigen::VectorXd& center,
                                           const MmlsConfig& cfg) {
    double rho = cfg.neighborhood_radius;
    double sigma = cfg.weight_scale > 0.0 ? cfg.weight_scale : rho / 2.0;
    if (cfg.min_neighbors <= 0) return {rho, sigma};
    std::vector<double> d2;
    cloud.squared_distances({center.data(), static_cast<std::size_t>(center.size())}, d2);
    for (int step = 0; step < cfg.radius_growth_steps; ++step) {
        std::size_t count = 0;
        const double r2 = rho * rho;
        for (const double v : d2)
            if (v <= r2) ++count;
        if (count >= static_cast<std::size_t>(cfg.min_neighbors)) break;
        rho *= 1.3;
        // an explicit weight scale stays put; the derived one tracks rho
        if (!(cfg.weight_scale > 0.0)) sigma = rho / 2.0;
    }
    return {rho, sigma};
}

} // namespace

TangentFrame fit_local_frame(const PointCloud& cloud, std::span<const double> query,
                             const MmlsConfig& cfg, FrameDiagnostics* diag) {
    const int n = cloud.ambient_dim();
    const int d = cloud.intrinsic_dim();
    if (static_cast<int>(query.size()) != n)
        fail(errc::invalid_argument, "query dimension does not match the cloud");
    if (!(cfg.neighborhood_radius > 0.0))
        fail(errc::invalid_argument, "neighborhood radius must be positive");
    const Eigen::Map<const Eigen::VectorXd> x(query.data(), n);
    const auto [rho, sigma] = effective_radius(cloud, x, cfg);
    Eigen::VectorXd origin = x;
    Eigen::MatrixXd basis;
    Eigen::VectorXd eigenvalues;

    int iterations = 0;
    std::size_t used = 0;
    for (; iterations < cfg.max_iterations; ++iterations) {
        const auto hood = gather(cloud, origin, rho, sigma);
        used = hood.index.size();
        if (used < static_cast<std::size_t>(d) + 1)
            fail(errc::sampling_deficiency,
                 "local frame fit found " + std::to_string(used) + " neighbors, needs at least " +
                     std::to_string(d + 1),
                 static_cast<long>(used));

        double wsum = 0.0;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
        for (std::size_t t = 0; t < used; ++t) {
            mean += hood.weight[t] * cloud.point_vec(hood.index[t]);
            wsum += hood.weight[t];
        }
        mean /= wsum;

        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t t = 0; t < used; ++t) {
            const Eigen::VectorXd diff = cloud.point_vec(hood.index[t]) - mean;
            cov.noalias() += hood.weight[t] * diff * diff.transpose();
        }
        cov /= wsum;

        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        eigenvalues = eig.eigenvalues().reverse(); // descending
        basis = eig.eigenvectors().rightCols(d).rowwise().reverse();

        if (eigenvalues(d - 1) <= 1e-13 * std::max(eigenvalues(0), 1e-300))
            fail(errc::sampling_deficiency,
                 "neighbors are affinely dependent: tangent eigenvalue underflow");

        const Eigen::VectorXd next = mean + basis * (basis.transpose() * (x - mean));
        const double moved = (next - origin).norm();
        origin = next;
        if (moved <= cfg.frame_tolerance * (1.0 + x.norm())) {
            ++iterations;
            break;
        }
    }

    if (diag != nullptr) {
        diag->eigenvalues = eigenvalues;
        diag->iterations = iterations;
        diag->neighbor_count = used;
        diag->weak_tangent_gap =
            (eigenvalues(d - 1) - eigenvalues(d)) <= cfg.eigen_gap_tolerance * eigenvalues(0);
    }
    return TangentFrame{origin, basis};
}

Eigen::VectorXd mmls_project(const PointCloud& cloud, std::span<const double> query,
                             const MmlsConfig& cfg, FrameDiagnostics* frame_diag) {
    const int n = cloud.ambient_dim();
    const int d = cloud.intrinsic_dim();
    const TangentFrame frame = fit_local_frame(cloud, query, cfg, frame_diag);

    const auto [rho, sigma] = effective_radius(cloud, frame.origin, cfg);
    const auto hood = gather(cloud, frame.origin, rho, sigma);

    const std::size_t monomials = monomial_count(cfg.degree, d);
    if (hood.index.size() < monomials)
        fail(errc::fit_degeneracy,
             "degree-" + std::to_string(cfg.degree) + " fit needs " + std::to_string(monomials) +
                 " monomials but only " + std::to_string(hood.index.size()) +
                 " neighbors are available",
             static_cast<long>(monomials));

    // monomial exponent tuples of total degree <= m
    std::vector<std::vector<int>> exponents;
    std::vector<int> expo(static_cast<std::size_t>(d), 0);
    const std::function<void(int, int)> enumerate = [&](int axis, int remaining) {
        if (axis == d) {
            exponents.push_back(expo);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            expo[static_cast<std::size_t>(axis)] = e;
            enumerate(axis + 1, remaining - e);
        }
        expo[static_cast<std::size_t>(axis)] = 0;
    };
    enumerate(0, cfg.degree);

    // weighted Vandermonde in rho-scaled tangent coordinates, one shared
    // factorization for the n ambient targets
    const std::size_t rows = hood.index.size();
    Eigen::MatrixXd vand(static_cast<Eigen::Index>(rows),
                         static_cast<Eigen::Index>(exponents.size()));
    Eigen::MatrixXd targets(static_cast<Eigen::Index>(rows), n);
    for (std::size_t r = 0; r < rows; ++r) {
        const Eigen::VectorXd p = cloud.point_vec(hood.index[r]);
        const Eigen::VectorXd t = frame.basis.transpose() * (p - frame.origin) / rho;
        const double sw = std::sqrt(hood.weight[r]);
        for (std::size_t c = 0; c < exponents.size(); ++c) {
            double phi = 1.0;
            for (int j = 0; j < d; ++j)
                phi *= std::pow(t(j), exponents[c][static_cast<std::size_t>(j)]);
            vand(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sw * phi;
        }
        targets.row(static_cast<Eigen::Index>(r)) = sw * p.transpose();
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vand);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(exponents.size()))
        fail(errc::fit_degeneracy,
             "polynomial fit is rank deficient: rank " + std::to_string(qr.rank()) + " of " +
                 std::to_string(exponents.size()) + " monomials",
             static_cast<long>(exponents.size()));
    const Eigen::MatrixXd coeffs = qr.solve(targets);
    if (frame_diag != nullptr && d == 2) {
        std::vector<double> angles;
        angles.reserve(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            const Eigen::VectorXd p = cloud.point_vec(hood.index[r]);
            const Eigen::VectorXd t = frame.basis.transpose() * (p - frame.origin);
            if (t.norm() > 1e-12) angles.push_back(std::atan2(t(1), t(0)));
        }
        std::sort(angles.begin(), angles.end());
        double widest = angles.empty() ? kTwoPi : kTwoPi - (angles.back() - angles.front());
        for (std::size_t t = 1; t < angles.size(); ++t)
            widest = std::max(widest, angles[t] - angles[t - 1]);
        frame_diag->origin_gap = widest;
    }
    if (frame_diag != nullptr) {
        const Eigen::MatrixXd residual = vand * coeffs - targets;
        double wsum = 0.0;
        for (const double w : hood.weight) wsum += w;
        frame_diag->fit_residual =
            std::sqrt(residual.squaredNorm() / std::max(wsum, 1e-300)) / rho;
    }

    // evaluation at the frame origin picks the constant-monomial row
    std::size_t constant_row = 0;
    for (std::size_t c = 0; c < exponents.size(); ++c) {
        bool all_zero = true;
        for (const int e : exponents[c]) all_zero &= (e == 0);
        if (all_zero) {
            constant_row = c;
            break;
        }
    }
    return coeffs.row(static_cast<Eigen::Index>(constant_row)).transpose();
}

Eigen::VectorXd mesh_node_position(const TangentFrame& frame, const UniformGrid& mesh,
                                   std::size_t flat) {
    const auto chart = mesh.point(flat);
    Eigen::VectorXd pos = frame.origin;
    for (int j = 0; j < mesh.dim(); ++j)
        pos += chart[static_cast<std::size_t>(j)] * frame.basis.col(j);
    return pos;
}

std::vector<GridFunction> component_functions(
    const TangentFrame& frame, const UniformGrid& mesh, const PointCloud& cloud,
    const MmlsConfig& cfg,
    const std::function<bool(const Eigen::VectorXd& plane_point)>& admissible,
    double output_reach) {
    const int n = cloud.ambient_dim();
    if (mesh.dim() != cloud.intrinsic_dim())
        fail(errc::invalid_argument, "mesh dimension does not match the intrinsic dimension");

    const std::size_t count = mesh.point_count();
    std::vector<std::uint8_t> known(count, 0);
    std::vector<std::vector<double>> values(static_cast<std::size_t>(n),
                                            std::vector<double>(count, 0.0));
    std::vector<double> d2;
    for (std::size_t flat = 0; flat < count; ++flat) {
        const Eigen::VectorXd pos = mesh_node_position(frame, mesh, flat);
        if (admissible && !admissible(pos)) continue;
        try {
            const Eigen::VectorXd projected =
                mmls_project(cloud, {pos.data(), static_cast<std::size_t>(pos.size())}, cfg);
            if (output_reach > 0.0) {
                cloud.squared_distances(
                    {projected.data(), static_cast<std::size_t>(projected.size())}, d2);
                if (*std::min_element(d2.begin(), d2.end()) > output_reach * output_reach)
                    continue; // extrapolated result, not supported by data
            }
            for (int j = 0; j < n; ++j) values[static_cast<std::size_t>(j)][flat] = projected(j);
            known[flat] = 1;
        } catch (const Error&) {
            // node stays unknown; the sweep continues
        }
    }

    std::vector<GridFunction> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out.emplace_back(mesh, std::move(values[static_cast<std::size_t>(j)]), GridMask(known));
    return out;
}

} // namespace mdi
