#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mdi/error.hpp"

namespace mdi {

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// Uniform grid of N^d points on an axis-aligned box, equal point count per
// axis. Point at multi-index n sits at origin + (edge/N) * n componentwise;
// values are flattened row-major with the last axis fastest.
class UniformGrid {
public:
    UniformGrid(int dim, int points_per_axis, std::vector<double> box_origin = {},
                double box_edge = kTwoPi);

    int dim() const { return dim_; }
    int points_per_axis() const { return points_per_axis_; }
    double box_edge() const { return box_edge_; }
    const std::vector<double>& box_origin() const { return box_origin_; }
    double mesh_size() const { return box_edge_ / points_per_axis_; }
    std::size_t point_count() const { return point_count_; }

    std::size_t flatten(std::span<const int> multi_index) const;
    void unflatten(std::size_t flat, std::span<int> multi_index_out) const;
    std::vector<int> unflatten(std::size_t flat) const;

    void point(std::span<const int> multi_index, std::span<double> out) const;
    std::vector<double> point(std::size_t flat) const;

    bool same_shape(const UniformGrid& other) const {
        return dim_ == other.dim_ && points_per_axis_ == other.points_per_axis_;
    }

private:
    int dim_;
    int points_per_axis_;
    std::vector<double> box_origin_;
    double box_edge_;
    std::size_t point_count_;
};

// Known/unknown partition of the grid points (X = known, Y = unknown).
class GridMask {
public:
    explicit GridMask(std::vector<std::uint8_t> known);
    static GridMask all_known(std::size_t n);

    std::size_t size() const { return known_.size(); }
    bool known(std::size_t flat) const { return known_[flat] != 0; }
    std::size_t known_count() const { return known_count_; }
    std::size_t unknown_count() const { return known_.size() - known_count_; }

    std::vector<std::size_t> unknown_indices() const;
    std::vector<std::size_t> known_indices() const;

private:
    std::vector<std::uint8_t> known_;
    std::size_t known_count_;
};

// Grid values plus the mask telling which of them are prescribed. Reading a
// masked-unknown value throws; imputation produces a fully-known copy.
class GridFunction {
public:
    GridFunction(UniformGrid grid, std::vector<double> values, GridMask mask);
    static GridFunction fully_known(UniformGrid grid, std::vector<double> values);

    const UniformGrid& grid() const { return grid_; }
    const GridMask& mask() const { return mask_; }

    double value(std::size_t flat) const;
    double value(std::span<const int> multi_index) const;

    // Unknown slots hold unspecified data; callers must consult the mask.
    std::span<const double> raw_values() const { return values_; }

    bool all_known() const { return mask_.unknown_count() == 0; }

    // Fully-known copy with vals[i] written at unknown_flat[i]; known values
    // are carried over bit-for-bit.
    GridFunction with_imputed(std::span<const std::size_t> unknown_flat,
                              std::span<const double> vals) const;

private:
    UniformGrid grid_;
    std::vector<double> values_;
    GridMask mask_;
};

// Order-2k central difference stencil: coefficient j is (-1)^j * C(2k, j).
class DifferenceStencil {
public:
    explicit DifferenceStencil(int half_order);

    int half_order() const { return half_order_; }
    int order() const { return 2 * half_order_; }
    std::span<const double> coefficients() const { return coefficients_; }

private:
    int half_order_;
    std::vector<double> coefficients_;
};

// Sum_j (-1)^j C(2k,j) values[position - k + j]; requires k neighbors on
// each side, never wraps.
double apply_central_difference(std::span<const double> values, int half_order,
                                std::size_t position);

// (Delta_1^m ... Delta_d^m f)(point) / h^{d m} with forward differences and
// periodic wraparound; every touched value must be known.
double mixed_divided_difference(const GridFunction& gf, int order_per_axis,
                                std::span<const int> point);

struct IndexRectangle {
    std::vector<int> lo, hi; // inclusive bounds per axis

    int dim() const { return static_cast<int>(lo.size()); }
    int extent(int axis) const { return hi[axis] - lo[axis] + 1; }
    std::size_t point_count() const;
    bool contains(std::span<const int> multi_index) const;
    bool operator==(const IndexRectangle& other) const = default;
};

// Minimal rectangle containing all unknown points with every unknown point
// strictly more than `half_order` grid steps from each face. Throws
// margin_violation (detail = offending axis) when the grid is too tight,
// nothing_to_impute when the mask has no unknowns.
IndexRectangle bounding_patch(const UniformGrid& grid, const GridMask& mask, int half_order);

double binomial(int n, int k);

} // namespace mdi
