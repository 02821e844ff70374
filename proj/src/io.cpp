#include "mdi/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mdi {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& msg) {
    fail(errc::parse_error, path + ":" + std::to_string(line) + ": " + msg,
         static_cast<long>(line));
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (const char c : line) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cell.empty()) cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell.push_back(c);
        }
    }
    if (!cell.empty()) cells.push_back(std::move(cell));
    return cells;
}

bool is_nan_token(const std::string& cell) {
    if (cell.size() != 3) return false;
    return std::tolower(cell[0]) == 'n' && std::tolower(cell[1]) == 'a' &&
           std::tolower(cell[2]) == 'n';
}

double parse_double(const std::string& cell, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) parse_fail(path, line, "trailing characters in '" + cell + "'");
        return v;
    } catch (const std::exception&) {
        parse_fail(path, line, "cannot parse number '" + cell + "'");
    }
}

long parse_index(const std::string& cell, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const long v = std::stol(cell, &used);
        if (used != cell.size() || v < 0) parse_fail(path, line, "bad index '" + cell + "'");
        return v;
    } catch (const std::exception&) {
        parse_fail(path, line, "cannot parse index '" + cell + "'");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(errc::invalid_argument, "cannot open '" + path + "' for writing");
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

GridCsv read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "cannot open '" + path + "'");

    struct Row {
        std::vector<long> index;
        double value;
        bool known;
    };
    std::vector<Row> rows;
    int dim = -1;
    long max_index = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto cells = split_cells(line);
        if (cells.empty() || cells.front().starts_with('#')) continue;
        if (cells.size() < 2) parse_fail(path, line_no, "need at least index and value columns");
        if (dim < 0)
            dim = static_cast<int>(cells.size()) - 1;
        else if (static_cast<int>(cells.size()) - 1 != dim)
            parse_fail(path, line_no, "inconsistent column count");
        Row row;
        for (int j = 0; j < dim; ++j) {
            row.index.push_back(parse_index(cells[static_cast<std::size_t>(j)], path, line_no));
            max_index = std::max(max_index, row.index.back());
        }
        const std::string& cell = cells.back();
        if (is_nan_token(cell)) {
            row.value = 0.0;
            row.known = false;
        } else {
            row.value = parse_double(cell, path, line_no);
            row.known = true;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(errc::parse_error, path + ": no data rows");

    GridCsv out;
    out.dim = dim;
    out.points_per_axis = static_cast<int>(max_index) + 1;
    std::size_t expected = 1;
    for (int j = 0; j < dim; ++j) expected *= static_cast<std::size_t>(out.points_per_axis);
    if (rows.size() != expected)
        fail(errc::parse_error,
             path + ": got " + std::to_string(rows.size()) + " rows, expected " +
                 std::to_string(expected) + " for an N^d grid with equal axes");

    const UniformGrid grid(out.dim, out.points_per_axis);
    out.values.assign(expected, 0.0);
    out.known.assign(expected, 0);
    std::vector<std::uint8_t> seen(expected, 0);
    std::vector<int> mi(static_cast<std::size_t>(dim));
    for (const auto& row : rows) {
        for (int j = 0; j < dim; ++j) {
            if (row.index[static_cast<std::size_t>(j)] >= out.points_per_axis)
                fail(errc::parse_error, path + ": index out of the inferred grid range");
            mi[static_cast<std::size_t>(j)] = static_cast<int>(row.index[static_cast<std::size_t>(j)]);
        }
        const std::size_t flat = grid.flatten(mi);
        if (seen[flat] != 0) fail(errc::parse_error, path + ": duplicate grid index");
        seen[flat] = 1;
        out.values[flat] = row.value;
        out.known[flat] = row.known ? 1 : 0;
    }
    return out;
}

GridFunction grid_function_from_csv(const GridCsv& csv, std::vector<double> box_origin,
                                    double box_edge) {
    UniformGrid grid(csv.dim, csv.points_per_axis, std::move(box_origin), box_edge);
    return GridFunction(std::move(grid), csv.values, GridMask(csv.known));
}

void write_grid_csv(const std::string& path, const GridFunction& gf) {
    auto out = open_out(path);
    const UniformGrid& grid = gf.grid();
    std::vector<int> mi(static_cast<std::size_t>(grid.dim()));
    for (std::size_t flat = 0; flat < grid.point_count(); ++flat) {
        grid.unflatten(flat, mi);
        for (const int idx : mi) out << idx << ',';
        if (gf.mask().known(flat))
            out << format_double(gf.raw_values()[flat]);
        else
            out << "NaN";
        out << '\n';
    }
}

void write_values_csv(const std::string& path, const UniformGrid& grid,
                      std::span<const double> values) {
    auto out = open_out(path);
    std::vector<int> mi(static_cast<std::size_t>(grid.dim()));
    for (std::size_t flat = 0; flat < grid.point_count(); ++flat) {
        grid.unflatten(flat, mi);
        for (const int idx : mi) out << idx << ',';
        out << format_double(values[flat]) << '\n';
    }
}

std::vector<std::uint8_t> read_mask_csv(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "cannot open '" + path + "'");
    std::vector<std::uint8_t> mask;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto cells = split_cells(line);
        if (cells.empty() || cells.front().starts_with('#')) continue;
        for (const auto& cell : cells) {
            if (cell == "0")
                mask.push_back(0);
            else if (cell == "1")
                mask.push_back(1);
            else
                parse_fail(path, line_no, "mask entries must be 0 or 1");
        }
    }
    if (mask.size() != expected)
        fail(errc::parse_error, path + ": mask has " + std::to_string(mask.size()) +
                                    " entries, expected " + std::to_string(expected));
    return mask;
}

PointCloud read_point_cloud(const std::string& path, int default_intrinsic_dim) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    int ambient = -1;
    int intrinsic = default_intrinsic_dim;
    std::vector<double> coords;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.starts_with('#')) {
            std::size_t pos = line.find("ambient=");
            if (pos != std::string::npos) ambient = std::atoi(line.c_str() + pos + 8);
            pos = line.find("intrinsic=");
            if (pos != std::string::npos) intrinsic = std::atoi(line.c_str() + pos + 10);
            continue;
        }
        const auto cells = split_cells(line);
        if (cells.empty()) continue;
        if (ambient < 0) ambient = static_cast<int>(cells.size());
        if (static_cast<int>(cells.size()) != ambient)
            parse_fail(path, line_no, "inconsistent coordinate count");
        for (const auto& cell : cells) coords.push_back(parse_double(cell, path, line_no));
    }
    if (coords.empty()) fail(errc::parse_error, path + ": no points");
    return PointCloud(ambient, intrinsic, std::move(coords));
}

void write_point_cloud(const std::string& path, const PointCloud& cloud) {
    auto out = open_out(path);
    out << "# ambient=" << cloud.ambient_dim() << " intrinsic=" << cloud.intrinsic_dim() << '\n';
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto p = cloud.point(i);
        for (std::size_t j = 0; j < p.size(); ++j)
            out << format_double(p[j]) << (j + 1 < p.size() ? "," : "");
        out << '\n';
    }
}

void write_tagged_points_csv(const std::string& path,
                             const std::vector<Eigen::VectorXd>& points,
                             const std::vector<bool>& imputed) {
    if (points.size() != imputed.size())
        fail(errc::invalid_argument, "point/tag length mismatch");
    auto out = open_out(path);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (Eigen::Index j = 0; j < points[i].size(); ++j) out << format_double(points[i](j)) << ',';
        out << (imputed[i] ? "imputed" : "known") << '\n';
    }
}

void write_coefficient_csv(const std::string& path, const UniformGrid& grid,
                           std::span<const std::complex<double>> coeffs) {
    if (coeffs.size() != grid.point_count())
        fail(errc::invalid_argument, "coefficient count does not match grid");
    auto out = open_out(path);
    std::vector<int> mi(static_cast<std::size_t>(grid.dim()));
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        grid.unflatten(flat, mi);
        for (const int idx : mi) out << idx << ',';
        out << format_double(std::abs(coeffs[flat])) << '\n';
    }
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::invalid_argument, "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        fail(errc::parse_error, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const nlohmann::json& value) {
    auto out = open_out(path);
    out << value.dump(2) << '\n';
}

} // namespace mdi
