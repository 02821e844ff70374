#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdi/grid.hpp"
#include "mdi/mmls.hpp"

namespace mdi {

struct GridCsv {
    int dim = 0;
    int points_per_axis = 0;
    std::vector<double> values;       // flat, row-major
    std::vector<std::uint8_t> known;  // NaN cells parse as unknown
};

// rows "index_0,...,index_{d-1},value"; a value of NaN marks the point unknown
GridCsv read_grid_csv(const std::string& path);
GridFunction grid_function_from_csv(const GridCsv& csv, std::vector<double> box_origin = {},
                                    double box_edge = kTwoPi);
void write_grid_csv(const std::string& path, const GridFunction& gf);
void write_values_csv(const std::string& path, const UniformGrid& grid,
                      std::span<const double> values);

// one 0/1 per row in flat row-major order
std::vector<std::uint8_t> read_mask_csv(const std::string& path, std::size_t expected);

// one point per row, comma or whitespace separated; an optional first line
// "# ambient=n intrinsic=d" pins the dimensions
PointCloud read_point_cloud(const std::string& path, int default_intrinsic_dim = 2);
void write_point_cloud(const std::string& path, const PointCloud& cloud);

void write_tagged_points_csv(const std::string& path,
                             const std::vector<Eigen::VectorXd>& points,
                             const std::vector<bool>& imputed);

// "k_0,...,k_{d-1},abs_c" rows for every frequency
void write_coefficient_csv(const std::string& path, const UniformGrid& grid,
                           std::span<const std::complex<double>> coeffs);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& value);

} // namespace mdi
