#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdi/datasets.hpp"
#include "mdi/io.hpp"

using namespace mdi;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "mdi_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("grid csv round trip preserves values and mask bits") {
    const UniformGrid grid(2, 5);
    std::vector<double> values(grid.point_count());
    std::vector<std::uint8_t> known(grid.point_count(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::sin(0.7 * i) * 1e3;
    known[7] = known[12] = 0;
    const GridFunction gf(grid, values, GridMask(known));

    const auto path = temp_file("grid.csv");
    write_grid_csv(path.string(), gf);
    const GridCsv read = read_grid_csv(path.string());
    CHECK(read.dim == 2);
    CHECK(read.points_per_axis == 5);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(read.known[i] == known[i]);
        if (known[i] != 0) CHECK(read.values[i] == values[i]); // %.17g is exact
    }
    const GridFunction back = grid_function_from_csv(read);
    CHECK(back.mask().unknown_count() == 2);
}

TEST_CASE("malformed grid csv reports the line") {
    const auto path = temp_file("bad.csv");
    std::ofstream(path) << "0,0,1.0\n0,1,oops\n";
    try {
        read_grid_csv(path.string());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::parse_error);
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        CHECK(e.detail() == 2);
    }
}

TEST_CASE("grid csv validates shape") {
    const auto path = temp_file("short.csv");
    std::ofstream(path) << "0,0,1.0\n0,1,2.0\n1,0,3.0\n"; // 3 of 4 points
    CHECK_THROWS_AS(read_grid_csv(path.string()), Error);

    const auto dup = temp_file("dup.csv");
    std::ofstream(dup) << "0,0,1.0\n0,1,2.0\n1,0,3.0\n1,0,4.0\n";
    CHECK_THROWS_AS(read_grid_csv(dup.string()), Error);
}

TEST_CASE("nan tokens mark unknown points") {
    const auto path = temp_file("nan.csv");
    std::ofstream(path) << "0,1.5\n1,NaN\n2,nan\n3,2.5\n";
    const GridCsv read = read_grid_csv(path.string());
    CHECK(read.known == std::vector<std::uint8_t>{1, 0, 0, 1});
}

TEST_CASE("separate mask csv") {
    const auto path = temp_file("mask.csv");
    std::ofstream(path) << "1\n0\n1\n1\n";
    const auto mask = read_mask_csv(path.string(), 4);
    CHECK(mask == std::vector<std::uint8_t>{1, 0, 1, 1});
    CHECK_THROWS_AS(read_mask_csv(path.string(), 5), Error);

    const auto bad = temp_file("badmask.csv");
    std::ofstream(bad) << "1\n2\n";
    CHECK_THROWS_AS(read_mask_csv(bad.string(), 2), Error);
}

TEST_CASE("point cloud round trip with header") {
    const TorusSpec spec;
    const PointCloud cloud = make_torus_cloud(spec);
    const auto path = temp_file("cloud.csv");
    write_point_cloud(path.string(), cloud);
    const PointCloud back = read_point_cloud(path.string(), 1);
    CHECK(back.ambient_dim() == 3);
    CHECK(back.intrinsic_dim() == 2); // from the header, not the fallback
    REQUIRE(back.size() == cloud.size());
    for (std::size_t i = 0; i < cloud.size(); i += 97)
        CHECK((back.point_vec(i) - cloud.point_vec(i)).norm() == 0.0);
}

TEST_CASE("dataset generation is deterministic") {
    const TorusSpec spec;
    const PointCloud a = make_torus_cloud(spec);
    const PointCloud b = make_torus_cloud(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.coords().size(); ++i)
        CHECK(a.coords()[i] == b.coords()[i]);

    const auto p1 = temp_file("det1.csv"), p2 = temp_file("det2.csv");
    write_point_cloud(p1.string(), a);
    write_point_cloud(p2.string(), b);
    CHECK(slurp(p1) == slurp(p2)); // byte-identical output

    std::vector<double> e1, e2;
    const auto g1 = make_annulus_grid({}, &e1);
    const auto g2 = make_annulus_grid({}, &e2);
    CHECK(e1 == e2);
    for (std::size_t i = 0; i < g1.raw_values().size(); ++i)
        if (g1.mask().known(i)) CHECK(g1.raw_values()[i] == g2.raw_values()[i]);
}

TEST_CASE("annulus dataset matches the documented counts") {
    const auto gf = make_annulus_grid({});
    CHECK(gf.mask().known_count() == 360);
    CHECK(gf.mask().unknown_count() == 2140);
}

TEST_CASE("tagged points and coefficient dumps") {
    const auto tagged = temp_file("tagged.csv");
    std::vector<Eigen::VectorXd> pts;
    Eigen::VectorXd p(3);
    p << 1, 2, 3;
    pts.push_back(p);
    p << 4, 5, 6;
    pts.push_back(p);
    write_tagged_points_csv(tagged.string(), pts, {false, true});
    const std::string text = slurp(tagged);
    CHECK(text.find("known") != std::string::npos);
    CHECK(text.find("imputed") != std::string::npos);

    const UniformGrid grid(1, 4);
    const std::vector<std::complex<double>> coeffs{{1, 0}, {0, 2}, {3, 4}, {0, 0}};
    const auto cpath = temp_file("coeffs.csv");
    write_coefficient_csv(cpath.string(), grid, coeffs);
    std::ifstream in(cpath);
    std::string line;
    std::getline(in, line);
    CHECK(line == "0,1");
    std::getline(in, line);
    CHECK(line == "1,2");
    std::getline(in, line);
    CHECK(line == "2,5");
}

TEST_CASE("json helpers") {
    const auto path = temp_file("config.json");
    write_json_file(path.string(), {{"alpha", 1.5}, {"name", "run"}});
    const auto back = read_json_file(path.string());
    CHECK(back["alpha"] == 1.5);
    CHECK(back["name"] == "run");

    const auto bad = temp_file("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(read_json_file(bad.string()), Error);
}

} // TEST_SUITE
