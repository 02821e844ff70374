#include "mdi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mdi {

UniformGrid::UniformGrid(int dim, int points_per_axis, std::vector<double> box_origin,
                         double box_edge)
    : dim_(dim), points_per_axis_(points_per_axis), box_origin_(std::move(box_origin)),
      box_edge_(box_edge) {
    if (dim_ < 1) fail(errc::invalid_argument, "grid dimension must be >= 1");
    if (points_per_axis_ < 2)
        fail(errc::invalid_argument, "grid needs at least 2 points per axis");
    if (!(box_edge_ > 0.0)) fail(errc::invalid_argument, "box edge must be positive");
    if (box_origin_.empty()) box_origin_.assign(static_cast<std::size_t>(dim_), 0.0);
    if (static_cast<int>(box_origin_.size()) != dim_)
        fail(errc::invalid_argument, "box origin length does not match dimension");
    point_count_ = 1;
    for (int j = 0; j < dim_; ++j) {
        if (point_count_ > std::numeric_limits<std::size_t>::max() /
                               static_cast<std::size_t>(points_per_axis_))
            fail(errc::invalid_argument, "grid too large");
        point_count_ *= static_cast<std::size_t>(points_per_axis_);
    }
}

std::size_t UniformGrid::flatten(std::span<const int> multi_index) const {
    std::size_t flat = 0;
    for (int j = 0; j < dim_; ++j) {
        const int nj = multi_index[static_cast<std::size_t>(j)];
        flat = flat * static_cast<std::size_t>(points_per_axis_) + static_cast<std::size_t>(nj);
    }
    return flat;
}

void UniformGrid::unflatten(std::size_t flat, std::span<int> out) const {
    for (int j = dim_ - 1; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] =
            static_cast<int>(flat % static_cast<std::size_t>(points_per_axis_));
        flat /= static_cast<std::size_t>(points_per_axis_);
    }
}

std::vector<int> UniformGrid::unflatten(std::size_t flat) const {
    std::vector<int> mi(static_cast<std::size_t>(dim_));
    unflatten(flat, mi);
    return mi;
}

void UniformGrid::point(std::span<const int> multi_index, std::span<double> out) const {
    const double h = mesh_size();
    for (int j = 0; j < dim_; ++j)
        out[static_cast<std::size_t>(j)] =
            box_origin_[static_cast<std::size_t>(j)] + h * multi_index[static_cast<std::size_t>(j)];
}

std::vector<double> UniformGrid::point(std::size_t flat) const {
    std::vector<double> p(static_cast<std::size_t>(dim_));
    point(unflatten(flat), p);
    return p;
}

GridMask::GridMask(std::vector<std::uint8_t> known) : known_(std::move(known)) {
    known_count_ = 0;
    for (const auto v : known_)
        if (v != 0) ++known_count_;
}

GridMask GridMask::all_known(std::size_t n) {
    return GridMask(std::vector<std::uint8_t>(n, std::uint8_t{1}));
}

std::vector<std::size_t> GridMask::unknown_indices() const {
    std::vector<std::size_t> out;
    out.reserve(unknown_count());
    for (std::size_t i = 0; i < known_.size(); ++i)
        if (known_[i] == 0) out.push_back(i);
    return out;
}

std::vector<std::size_t> GridMask::known_indices() const {
    std::vector<std::size_t> out;
    out.reserve(known_count_);
    for (std::size_t i = 0; i < known_.size(); ++i)
        if (known_[i] != 0) out.push_back(i);
    return out;
}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values, GridMask mask)
    : grid_(std::move(grid)), values_(std::move(values)), mask_(std::move(mask)) {
    if (values_.size() != grid_.point_count())
        fail(errc::invalid_argument, "value count does not match grid point count");
    if (mask_.size() != values_.size())
        fail(errc::invalid_argument, "mask length does not match grid point count");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (mask_.known(i) && !std::isfinite(values_[i]))
            fail(errc::invalid_argument, "known grid value is not finite");
}

GridFunction GridFunction::fully_known(UniformGrid grid, std::vector<double> values) {
    const std::size_t n = values.size();
    return GridFunction(std::move(grid), std::move(values), GridMask::all_known(n));
}

double GridFunction::value(std::size_t flat) const {
    if (!mask_.known(flat))
        fail(errc::unknown_value,
             "grid value at flat index " + std::to_string(flat) + " is unknown");
    return values_[flat];
}

double GridFunction::value(std::span<const int> multi_index) const {
    return value(grid_.flatten(multi_index));
}

GridFunction GridFunction::with_imputed(std::span<const std::size_t> unknown_flat,
                                        std::span<const double> vals) const {
    if (unknown_flat.size() != vals.size())
        fail(errc::invalid_argument, "imputed index/value length mismatch");
    std::vector<double> merged = values_;
    for (std::size_t i = 0; i < unknown_flat.size(); ++i) {
        if (mask_.known(unknown_flat[i]))
            fail(errc::invalid_argument, "imputed value targets a known point");
        if (!std::isfinite(vals[i]))
            fail(errc::invalid_argument, "imputed value is not finite");
        merged[unknown_flat[i]] = vals[i];
    }
    return GridFunction::fully_known(grid_, std::move(merged));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
    return std::round(out);
}

DifferenceStencil::DifferenceStencil(int half_order) : half_order_(half_order) {
    if (half_order_ < 1) fail(errc::invalid_argument, "stencil half-order must be >= 1");
    const int width = 2 * half_order_ + 1;
    coefficients_.resize(static_cast<std::size_t>(width));
    for (int j = 0; j < width; ++j)
        coefficients_[static_cast<std::size_t>(j)] =
            ((j % 2 == 0) ? 1.0 : -1.0) * binomial(2 * half_order_, j);
}

double apply_central_difference(std::span<const double> values, int half_order,
                                std::size_t position) {
    const DifferenceStencil stencil(half_order);
    const int k = stencil.half_order();
    if (position < static_cast<std::size_t>(k) ||
        position + static_cast<std::size_t>(k) >= values.size())
        fail(errc::stencil_support,
             "central difference of order " + std::to_string(2 * k) + " at position " +
                 std::to_string(position) + " leaves the sample range");
    double acc = 0.0;
    const auto coeff = stencil.coefficients();
    for (int j = 0; j <= 2 * k; ++j)
        acc += coeff[static_cast<std::size_t>(j)] *
               values[position - static_cast<std::size_t>(k) + static_cast<std::size_t>(j)];
    return acc;
}

double mixed_divided_difference(const GridFunction& gf, int order_per_axis,
                                std::span<const int> point) {
    const UniformGrid& grid = gf.grid();
    const int d = grid.dim();
    const int m = order_per_axis;
    if (m < 1) fail(errc::invalid_argument, "difference order must be >= 1");
    const int N = grid.points_per_axis();

    // Tensor product of 1D forward differences, periodic in every axis.
    std::vector<int> offset(static_cast<std::size_t>(d), 0);
    std::vector<int> shifted(static_cast<std::size_t>(d));
    double acc = 0.0;
    while (true) {
        double coeff = 1.0;
        for (int j = 0; j < d; ++j) {
            const int t = offset[static_cast<std::size_t>(j)];
            coeff *= (((m - t) % 2 == 0) ? 1.0 : -1.0) * binomial(m, t);
            shifted[static_cast<std::size_t>(j)] =
                (point[static_cast<std::size_t>(j)] + t) % N;
        }
        acc += coeff * gf.value(shifted);
        int axis = d - 1;
        while (axis >= 0 && offset[static_cast<std::size_t>(axis)] == m) {
            offset[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
        ++offset[static_cast<std::size_t>(axis)];
    }
    const double h = grid.mesh_size();
    return acc / std::pow(h, static_cast<double>(d) * m);
}

std::size_t IndexRectangle::point_count() const {
    std::size_t n = 1;
    for (int a = 0; a < dim(); ++a) n *= static_cast<std::size_t>(extent(a));
    return n;
}

bool IndexRectangle::contains(std::span<const int> multi_index) const {
    for (int a = 0; a < dim(); ++a) {
        const int v = multi_index[static_cast<std::size_t>(a)];
        if (v < lo[static_cast<std::size_t>(a)] || v > hi[static_cast<std::size_t>(a)])
            return false;
    }
    return true;
}

IndexRectangle bounding_patch(const UniformGrid& grid, const GridMask& mask, int half_order) {
    if (half_order < 1) fail(errc::invalid_argument, "half-order must be >= 1");
    if (mask.size() != grid.point_count())
        fail(errc::invalid_argument, "mask length does not match grid");
    const int d = grid.dim();
    const int N = grid.points_per_axis();

    std::vector<int> lo(static_cast<std::size_t>(d), N);
    std::vector<int> hi(static_cast<std::size_t>(d), -1);
    std::vector<int> mi(static_cast<std::size_t>(d));
    bool any = false;
    for (std::size_t flat = 0; flat < mask.size(); ++flat) {
        if (mask.known(flat)) continue;
        any = true;
        grid.unflatten(flat, mi);
        for (int a = 0; a < d; ++a) {
            lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)],
                                                       mi[static_cast<std::size_t>(a)]);
            hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)],
                                                       mi[static_cast<std::size_t>(a)]);
        }
    }
    if (!any) fail(errc::nothing_to_impute, "mask has no unknown points");

    // Unknown points must sit strictly more than half_order steps from every
    // face, so the minimal rectangle pads by half_order + 1.
    const int margin = half_order + 1;
    IndexRectangle rect;
    rect.lo.resize(static_cast<std::size_t>(d));
    rect.hi.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        const int rlo = lo[static_cast<std::size_t>(a)] - margin;
        const int rhi = hi[static_cast<std::size_t>(a)] + margin;
        if (rlo < 0 || rhi > N - 1)
            fail(errc::margin_violation,
                 "hole is within " + std::to_string(half_order) + " + 1 grid steps of the "
                 "grid boundary along axis " + std::to_string(a), a);
        rect.lo[static_cast<std::size_t>(a)] = rlo;
        rect.hi[static_cast<std::size_t>(a)] = rhi;
    }
    return rect;
}

const char* errc_name(errc code) {
    switch (code) {
        case errc::invalid_argument: return "invalid_argument";
        case errc::parse_error: return "parse_error";
        case errc::unknown_value: return "unknown_value";
        case errc::stencil_support: return "stencil_support";
        case errc::margin_violation: return "margin_violation";
        case errc::nothing_to_impute: return "nothing_to_impute";
        case errc::degenerate_system: return "degenerate_system";
        case errc::undefined_frequency: return "undefined_frequency";
        case errc::hypothesis_violation: return "hypothesis_violation";
        case errc::non_unique_minimizer: return "non_unique_minimizer";
        case errc::sampling_deficiency: return "sampling_deficiency";
        case errc::fit_degeneracy: return "fit_degeneracy";
        case errc::unstable_plane: return "unstable_plane";
        case errc::singular_matrix: return "singular_matrix";
        case errc::no_hole: return "no_hole";
    }
    return "unknown";
}

bool is_input_error(errc code) {
    return code == errc::invalid_argument || code == errc::parse_error;
}

} // namespace mdi
