#include "mdi/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

#include "mdi/datasets.hpp"
#include "mdi/holefill.hpp"
#include "mdi/io.hpp"
#include "mdi/kernels.hpp"
#include "mdi/random.hpp"
#include "mdi/verify.hpp"

namespace mdi {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_outdir(std::string& out) {
    if (const char* env = std::getenv("MDI_OUT_DIR"); env != nullptr && *env != '\0') out = env;
    fs::create_directories(out);
}

// Config file keys mirror the long option names; command-line flags win.
void apply_config(CLI::App* cmd, const std::string& config_path) {
    if (config_path.empty()) return;
    const json config = read_json_file(config_path);
    if (!config.is_object()) fail(errc::parse_error, config_path + ": config must be an object");
    for (const auto& [key, value] : config.items()) {
        const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            fail(errc::invalid_argument, config_path + ": unknown config key '" + key + "'");
        if (opt->count() > 0) continue; // explicit flag overrides the file
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        CLI::Option* mutable_opt = cmd->get_option("--" + key);
        mutable_opt->add_result(text);
        mutable_opt->run_callback(); // push the value into the bound variable
    }
}

json option_snapshot(const CLI::App* cmd) {
    json out = json::object();
    for (const CLI::Option* opt : cmd->get_options()) {
        const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
        if (name.empty() || name == "help" || name == "config") continue;
        const std::string value = opt->count() > 0 ? opt->results().front() : opt->get_default_str();
        out[name] = value;
    }
    return out;
}

int fail_with_report(const Error& e, const std::string& outdir) {
    const json report{{"error", errc_name(e.code())},
                      {"message", e.what()},
                      {"detail", e.detail()}};
    std::cerr << "error: " << e.what() << "\n";
    if (!outdir.empty() && fs::exists(outdir))
        write_json_file((fs::path(outdir) / "error.json").string(), report);
    return is_input_error(e.code()) ? 2 : 1;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
    std::string shape;
    std::string out = "out";
    std::uint64_t seed = 1;
    double noise = -1.0; // per-shape default when negative
    int points = 0;      // grid or lattice resolution, per-shape default when 0
    double hole_radius = -1.0;
    double outer_radius = M_PI / 2.0;
    double cap_radius = -1.0;
    double tube_radius = TorusSpec{}.tube_radius;
    double tube_variation = TorusSpec{}.tube_variation;
    int ring_samples = TorusSpec{}.samples_along_ring;
    int tube_samples = TorusSpec{}.samples_around_tube;
    int samples = 2000;
    double jitter = 0.3;
    std::string levels = "0.6,0.8,1.0,1.2";
};

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    std::string cell;
    for (const char c : text + ",") {
        if (c == ',') {
            if (!cell.empty()) out.push_back(std::atof(cell.c_str()));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    if (out.empty()) fail(errc::invalid_argument, "no levels given");
    return out;
}

int run_generate(const GenerateOptions& opt, json config) {
    const fs::path dir(opt.out);
    config["command"] = "generate";

    if (opt.shape == "annulus-grid") {
        AnnulusGridSpec spec;
        spec.points_per_axis = opt.points > 0 ? opt.points : 50;
        spec.outer_radius = opt.outer_radius;
        spec.hole_radius = opt.hole_radius >= 0 ? opt.hole_radius : 0.8;
        spec.noise_amplitude = opt.noise >= 0 ? opt.noise : 0.1;
        spec.seed = opt.seed;
        std::vector<double> exact;
        const GridFunction gf = make_annulus_grid(spec, &exact);
        write_grid_csv((dir / "grid.csv").string(), gf);
        write_values_csv((dir / "exact.csv").string(), gf.grid(), exact);
        config["known_points"] = gf.mask().known_count();
        config["unknown_points"] = gf.mask().unknown_count();
    } else if (opt.shape == "disk-grid") {
        DiskGridSpec spec;
        spec.points_per_axis = opt.points > 0 ? opt.points : 40;
        spec.hole_radius = opt.hole_radius >= 0 ? opt.hole_radius : 0.5;
        spec.noise_amplitude = opt.noise >= 0 ? opt.noise : 0.01;
        spec.seed = opt.seed;
        std::vector<double> exact;
        const GridFunction gf = make_disk_grid(spec, &exact);
        write_grid_csv((dir / "grid.csv").string(), gf);
        write_values_csv((dir / "exact.csv").string(), gf.grid(), exact);
        config["known_points"] = gf.mask().known_count();
        config["unknown_points"] = gf.mask().unknown_count();
    } else if (opt.shape == "plane") {
        PlaneSpec spec;
        spec.samples_per_axis = opt.points > 0 ? opt.points : 40;
        spec.hole_radius = opt.hole_radius >= 0 ? opt.hole_radius : 0.15;
        spec.jitter = opt.jitter;
        spec.seed = opt.seed;
        write_point_cloud((dir / "cloud.csv").string(), make_plane_cloud(spec));
    } else if (opt.shape == "sphere") {
        SphereSpec spec;
        spec.samples = opt.samples;
        spec.cap_radius = opt.cap_radius >= 0 ? opt.cap_radius : 0.35;
        spec.cap_polar = 0.9;
        spec.cap_azimuth = 0.4;
        spec.jitter = opt.jitter > 0 ? 0.15 : 0.0;
        spec.seed = opt.seed;
        write_point_cloud((dir / "cloud.csv").string(), make_sphere_cloud(spec));
    } else if (opt.shape == "torus") {
        TorusSpec spec;
        spec.tube_radius = opt.tube_radius;
        spec.tube_variation = opt.tube_variation;
        spec.samples_along_ring = opt.ring_samples;
        spec.samples_around_tube = opt.tube_samples;
        spec.jitter = opt.jitter;
        spec.cap_radius = opt.cap_radius >= 0 ? opt.cap_radius : TorusSpec{}.cap_radius;
        spec.seed = opt.seed;
        write_point_cloud((dir / "cloud.csv").string(), make_torus_cloud(spec));
    } else if (opt.shape == "cone4d") {
        CrossSectionSpec spec;
        spec.levels = parse_levels(opt.levels);
        spec.points_per_axis = opt.points > 0 ? opt.points : 24;
        spec.hole_radius = opt.hole_radius >= 0 ? opt.hole_radius : 0.18;
        spec.noise_amplitude = opt.noise >= 0 ? opt.noise : 0.0;
        spec.seed = opt.seed;
        const CrossSectionData data = make_cross_sections(spec);
        json emitted = json::array();
        for (std::size_t s = 0; s < data.sections.size(); ++s) {
            const auto& section = data.sections[s];
            for (std::size_t c = 0; c < section.components.size(); ++c) {
                const std::string name =
                    "section" + std::to_string(s) + "_x" + std::to_string(c + 1) + ".csv";
                write_grid_csv((dir / name).string(), section.components[c]);
            }
            emitted.push_back(section.level);
        }
        config["levels_emitted"] = emitted;
        config["levels_skipped"] = data.skipped_levels;

        // completed sections with per-level radius residuals
        const CrossSectionResult demo = cross_section_demo(spec);
        json residuals = json::array();
        for (std::size_t s = 0; s < demo.sections.size(); ++s) {
            const auto& section = demo.sections[s];
            for (std::size_t c = 0; c < section.components.size(); ++c) {
                const std::string name = "section" + std::to_string(s) + "_x" +
                                         std::to_string(c + 1) + "_completed.csv";
                write_grid_csv((dir / name).string(), section.components[c]);
            }
            residuals.push_back({{"level", section.level},
                                 {"max_radius_error", section.max_radius_error}});
        }
        config["completed_sections"] = residuals;
    } else {
        fail(errc::invalid_argument, "unknown shape '" + opt.shape + "'");
    }

    write_json_file((dir / "config.json").string(), config);
    return 0;
}

// -------------------------------------------------------------- impute-grid

struct ImputeGridOptions {
    std::string input;
    std::string mask;
    std::string exact;
    std::string backend = "spectral";
    std::string scheme = "hyperbolic";
    std::string out = "out";
    int smoothness = 8;
    double threshold = 1e-3;
    double derivative_bound = 1.0;
    double truncation = 0.0;
    int half_order = 3;
    double box_edge = kTwoPi;
};

int run_impute_grid(const ImputeGridOptions& opt, json config) {
    const fs::path dir(opt.out);
    config["command"] = "impute-grid";

    GridCsv csv = read_grid_csv(opt.input);
    if (!opt.mask.empty()) csv.known = read_mask_csv(opt.mask, csv.values.size());
    const GridFunction gf = grid_function_from_csv(csv, {}, opt.box_edge);

    json diagnostics;
    GridFunction completed = gf;
    if (opt.backend == "spectral") {
        const DecayParams params{.smoothness_order = opt.smoothness,
                                 .truncation_bound = opt.threshold,
                                 .derivative_bound = opt.derivative_bound};
        const WeightScheme scheme = opt.scheme == "prescribed"
                                        ? WeightScheme::prescribed_decay
                                        : WeightScheme::hyperbolic_corner;
        auto sys = assemble_spectral(gf, build_weights(gf.grid(), params, scheme));
        sys.solve_truncation = opt.truncation;
        auto result = solve_spectral(sys);
        diagnostics = {{"cond", result.diag.cond},
                       {"cost", result.diag.cost},
                       {"rank_deficient", result.diag.rank_deficient},
                       {"max_unpenalized_coeff", result.diag.max_unpenalized_coeff},
                       {"max_penalized_coeff", result.diag.max_penalized_coeff},
                       {"rank", result.diag.rank},
                       {"residual_norm", result.diag.residual_norm},
                       {"smoothness_order", opt.smoothness},
                       {"solve_truncation", opt.truncation}};
        const auto coeffs = dft_forward(result.completed.grid(), result.completed.raw_values());
        write_coefficient_csv((dir / "coefficients.csv").string(), result.completed.grid(),
                              coeffs);
        completed = std::move(result.completed);
    } else if (opt.backend == "variational") {
        const auto patch = assemble_variational(gf, {.half_order = opt.half_order});
        auto result = solve_variational(patch);
        diagnostics = {{"cond_AtA", result.diag.cond_AtA},
                       {"rows", result.diag.rows},
                       {"cols", result.diag.cols},
                       {"affected_stencils", result.diag.affected_stencils},
                       {"max_affected_diff", result.diag.max_affected_diff},
                       {"J_value", result.diag.functional_value},
                       {"residual_norm", result.diag.residual_norm},
                       {"half_order", opt.half_order}};
        completed = std::move(result.completed);
    } else {
        fail(errc::invalid_argument, "unknown backend '" + opt.backend + "'");
    }

    if (!opt.exact.empty()) {
        const GridCsv exact = read_grid_csv(opt.exact);
        double unknown_max = 0.0;
        for (std::size_t flat = 0; flat < csv.values.size(); ++flat)
            if (csv.known[flat] == 0)
                unknown_max = std::max(unknown_max,
                                       std::abs(completed.value(flat) - exact.values[flat]));
        // max error over every imputed point (for annulus-style masks this
        // includes the extrapolated exterior, not just the hole)
        diagnostics["max_error_unknown"] = unknown_max;
    }

    write_grid_csv((dir / "completed.csv").string(), completed);
    write_json_file((dir / "diagnostics.json").string(), diagnostics);
    write_json_file((dir / "config.json").string(), config);
    return 0;
}

// ---------------------------------------------------------- impute-manifold

struct ImputeManifoldOptions {
    std::string input;
    std::string out = "out";
    std::string backend = "variational";
    std::string truth_config;
    int intrinsic_dim = 2;
    int degree = 5;
    int half_order = 3;
    double rho = 0.0;
    double sigma = 0.0;
    double mesh_multiplier = 1.0;
    double admissibility = 1.0;
};

double json_number(const json& object, const std::string& key, double fallback) {
    if (!object.contains(key)) return fallback;
    const json& value = object.at(key);
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return std::atof(value.get<std::string>().c_str());
    return fallback;
}

double truth_distance(const json& truth, std::span<const double> p) {
    const std::string shape = truth.value("shape", "");
    if (shape == "torus") {
        TorusSpec spec;
        spec.tube_radius = json_number(truth, "tube-radius", spec.tube_radius);
        spec.tube_variation = json_number(truth, "tube-variation", spec.tube_variation);
        return torus_surface_distance(spec, p);
    }
    if (shape == "sphere") {
        SphereSpec spec;
        return sphere_surface_distance(spec, p);
    }
    if (shape == "plane") {
        PlaneSpec spec;
        return plane_surface_distance(spec, p);
    }
    fail(errc::invalid_argument, "truth config has unsupported shape '" + shape + "'");
}

int run_impute_manifold(const ImputeManifoldOptions& opt, json config) {
    const fs::path dir(opt.out);
    config["command"] = "impute-manifold";

    const PointCloud cloud = read_point_cloud(opt.input, opt.intrinsic_dim);
    PipelineConfig cfg;
    cfg.mmls.degree = opt.degree;
    cfg.mmls.neighborhood_radius = opt.rho;
    cfg.mmls.weight_scale = opt.sigma;
    cfg.variational.half_order = opt.half_order;
    cfg.mesh_multiplier = opt.mesh_multiplier;
    cfg.admissibility_multiplier = opt.admissibility;
    cfg.backend = opt.backend == "spectral" ? PipelineBackend::spectral
                                            : PipelineBackend::variational;

    const PipelineResult result = fill_manifold_hole(cloud, cfg);
    json diagnostics{{"no_hole", result.no_hole},
                     {"median_spacing", result.diag.median_spacing}};
    if (result.no_hole) {
        std::cout << "no hole detected; nothing to impute\n";
        write_json_file((dir / "diagnostics.json").string(), diagnostics);
        write_json_file((dir / "config.json").string(), config);
        return 0;
    }

    diagnostics["fill_distance"] = result.diag.fill_distance;
    diagnostics["diameter_estimate"] = result.diag.diameter_estimate;
    diagnostics["diameter_to_fill_ratio"] = result.diag.diameter_to_fill_ratio;
    diagnostics["plane_stability"] = result.diag.plane_stability;
    diagnostics["mesh_nodes"] = result.diag.mesh_nodes;
    diagnostics["patch_points_per_axis"] = result.diag.patch_points_per_axis;
    diagnostics["patch_spacing"] = result.diag.patch_spacing;
    diagnostics["admissible_nodes"] = result.diag.admissible_nodes;
    diagnostics["imputed_nodes"] = result.diag.imputed_nodes;
    json comps = json::array();
    for (const auto& comp : result.diag.components)
        comps.push_back({{"cond", comp.cond},
                         {"residual_norm", comp.residual_norm},
                         {"functional_value", comp.functional_value}});
    diagnostics["components"] = comps;

    std::vector<Eigen::VectorXd> points;
    std::vector<bool> imputed;
    for (const auto& fp : result.points) {
        points.push_back(fp.position);
        imputed.push_back(fp.imputed);
    }
    write_tagged_points_csv((dir / "completed_points.csv").string(), points, imputed);

    if (!opt.truth_config.empty()) {
        const json truth = read_json_file(opt.truth_config);
        double known_max = 0.0, imputed_max = 0.0;
        for (const auto& fp : result.points) {
            const double dist = truth_distance(
                truth, {fp.position.data(), static_cast<std::size_t>(fp.position.size())});
            (fp.imputed ? imputed_max : known_max) = std::max(
                fp.imputed ? imputed_max : known_max, dist);
        }
        diagnostics["known_max_surface_distance"] = known_max;
        diagnostics["imputed_max_surface_distance"] = imputed_max;
    }

    write_json_file((dir / "diagnostics.json").string(), diagnostics);
    write_json_file((dir / "config.json").string(), config);
    return 0;
}

// -------------------------------------------------------------- verify/bench

int run_verify(const std::string& out) {
    const auto results = verify_all();
    std::size_t failed = 0;
    for (const auto& check : results) {
        if (!check.pass) ++failed;
        std::printf("[%s] %-32s measured %.6e bound %.6e\n", check.pass ? "PASS" : "FAIL",
                    check.name.c_str(), check.measured, check.bound);
    }
    std::printf("%zu checks, %zu failed\n", results.size(), failed);
    if (!out.empty()) {
        json report = json::array();
        for (const auto& check : results)
            report.push_back({{"name", check.name},
                              {"pass", check.pass},
                              {"measured", check.measured},
                              {"bound", check.bound}});
        fs::create_directories(out);
        write_json_file((fs::path(out) / "verify.json").string(), report);
    }
    return failed == 0 ? 0 : 1;
}

int run_bench(const std::string& what) {
    using clock = std::chrono::steady_clock;
    if (what == "kernels") {
        const std::size_t n = 1 << 20;
        std::mt19937_64 rng(3);
        std::vector<double> a(n), b(n);
        std::vector<std::int32_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = uniform01(rng);
            b[i] = uniform01(rng);
            idx[i] = static_cast<std::int32_t>(rng() % 64);
        }
        std::vector<double> cos_tab(64), sin_tab(64);
        for (int t = 0; t < 64; ++t) {
            cos_tab[t] = std::cos(kTwoPi * t / 64);
            sin_tab[t] = std::sin(kTwoPi * t / 64);
        }
        const auto time_of = [&](const kernels::Ops& ops) {
            const auto t0 = clock::now();
            double sink = 0.0;
            for (int rep = 0; rep < 50; ++rep) {
                sink += ops.dot(a.data(), b.data(), n);
                double c = 0, s = 0;
                ops.gather_trig_dot(a.data(), idx.data(), n, cos_tab.data(), sin_tab.data(), &c,
                                    &s);
                sink += c + s;
            }
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            return std::pair{secs, sink};
        };
        const auto [scalar_secs, s1] = time_of(kernels::scalar_ops());
        const auto [active_secs, s2] = time_of(kernels::active());
        std::printf("kernels: scalar %.3fs, %s %.3fs (x%.2f)  [checksum %.3g / %.3g]\n",
                    scalar_secs, kernels::backend_name(), active_secs,
                    scalar_secs / active_secs, s1, s2);
        return 0;
    }
    if (what == "scaling") {
        const std::vector<int> meshes{16, 32, 64, 128};
        for (const auto scenario : {HoleScenario::small_hole, HoleScenario::large_hole}) {
            const auto study = error_scaling_study(scenario, 1, 1, 0.0, meshes, 7);
            std::printf("%s hole, k=1, d=1, exact data:\n",
                        scenario == HoleScenario::small_hole ? "small" : "large");
            for (const auto& row : study.rows)
                std::printf("  N=%-4d h=%.4e max_error=%.6e\n", row.points_per_axis,
                            row.mesh_size, row.max_error);
            std::printf("  fitted slope %.2f\n", study.fitted_slope);
        }
        return 0;
    }
    fail(errc::invalid_argument, "unknown bench target '" + what + "'");
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"grid and manifold data imputation toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    GenerateOptions gen;
    std::string gen_config;
    CLI::App* generate = app.add_subcommand("generate", "emit a seeded benchmark dataset");
    generate->add_option("--shape", gen.shape,
                         "annulus-grid | disk-grid | plane | sphere | torus | cone4d");
    generate->add_option("--out", gen.out, "output directory");
    generate->add_option("--seed", gen.seed, "rng seed");
    generate->add_option("--noise", gen.noise, "noise amplitude (uniform on [-a, a])");
    generate->add_option("--points", gen.points, "grid or lattice points per axis");
    generate->add_option("--hole-radius", gen.hole_radius, "hole radius");
    generate->add_option("--outer-radius", gen.outer_radius, "annulus outer radius");
    generate->add_option("--cap-radius", gen.cap_radius, "deleted cap radius");
    generate->add_option("--tube-radius", gen.tube_radius, "torus tube radius");
    generate->add_option("--tube-variation", gen.tube_variation, "torus tube radius variation");
    generate->add_option("--ring-samples", gen.ring_samples, "torus lattice count along the ring");
    generate->add_option("--tube-samples", gen.tube_samples, "torus lattice count around the tube");
    generate->add_option("--samples", gen.samples, "sphere sample count");
    generate->add_option("--jitter", gen.jitter, "lattice jitter fraction");
    generate->add_option("--levels", gen.levels, "cone4d fourth-coordinate levels");
    generate->add_option("--config", gen_config, "JSON config file");

    ImputeGridOptions ig;
    std::string ig_config;
    CLI::App* impute_grid = app.add_subcommand("impute-grid", "fill NaN holes in a grid CSV");
    impute_grid->add_option("--input", ig.input, "grid CSV path");
    impute_grid->add_option("--mask", ig.mask, "separate 0/1 mask CSV");
    impute_grid->add_option("--exact", ig.exact, "ground-truth CSV for error reporting");
    impute_grid->add_option("--backend", ig.backend, "spectral | variational");
    impute_grid->add_option("--scheme", ig.scheme, "hyperbolic | prescribed (spectral)");
    impute_grid->add_option("--out", ig.out, "output directory");
    impute_grid->add_option("--smoothness", ig.smoothness, "decay smoothness order M");
    impute_grid->add_option("--threshold", ig.threshold, "hyperbolic truncation bound C");
    impute_grid->add_option("--derivative-bound", ig.derivative_bound, "mixed derivative bound");
    impute_grid->add_option("--truncation", ig.truncation, "TSVD solve truncation");
    impute_grid->add_option("--half-order", ig.half_order, "difference half-order k");
    impute_grid->add_option("--box-edge", ig.box_edge, "grid box edge length");
    impute_grid->add_option("--config", ig_config, "JSON config file");

    ImputeManifoldOptions im;
    std::string im_config;
    CLI::App* impute_manifold =
        app.add_subcommand("impute-manifold", "fill a hole in a point-cloud manifold");
    impute_manifold->add_option("--input", im.input, "point cloud path");
    impute_manifold->add_option("--out", im.out, "output directory");
    impute_manifold->add_option("--backend", im.backend, "variational | spectral");
    impute_manifold->add_option("--truth-config", im.truth_config,
                                "dataset config.json for surface-distance reporting");
    impute_manifold->add_option("--intrinsic-dim", im.intrinsic_dim, "manifold dimension");
    impute_manifold->add_option("--degree", im.degree, "local polynomial degree");
    impute_manifold->add_option("--half-order", im.half_order, "difference half-order k");
    impute_manifold->add_option("--rho", im.rho, "neighborhood radius (0 = auto)");
    impute_manifold->add_option("--sigma", im.sigma, "weight scale (0 = rho/2)");
    impute_manifold->add_option("--mesh-multiplier", im.mesh_multiplier,
                                "mesh spacing as a multiple of the fill distance");
    impute_manifold->add_option("--admissibility", im.admissibility,
                                "admissibility belt width multiplier");
    impute_manifold->add_option("--config", im_config, "JSON config file");

    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "run the numerical bound checks");
    verify->add_option("--out", verify_out, "optional directory for the JSON report");

    std::string bench_what = "kernels";
    CLI::App* bench = app.add_subcommand("bench", "timing and refinement tables");
    bench->add_option("--what", bench_what, "kernels | scaling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string outdir;
    try {
        if (generate->parsed()) {
            apply_config(generate, gen_config);
            if (gen.shape.empty())
                fail(errc::invalid_argument, "generate requires --shape (or a config with it)");
            outdir = gen.out;
            ensure_outdir(gen.out);
            outdir = gen.out;
            return run_generate(gen, option_snapshot(generate));
        }
        if (impute_grid->parsed()) {
            apply_config(impute_grid, ig_config);
            if (ig.input.empty()) fail(errc::invalid_argument, "impute-grid requires --input");
            ensure_outdir(ig.out);
            outdir = ig.out;
            return run_impute_grid(ig, option_snapshot(impute_grid));
        }
        if (impute_manifold->parsed()) {
            apply_config(impute_manifold, im_config);
            if (im.input.empty())
                fail(errc::invalid_argument, "impute-manifold requires --input");
            ensure_outdir(im.out);
            outdir = im.out;
            return run_impute_manifold(im, option_snapshot(impute_manifold));
        }
        if (verify->parsed()) return run_verify(verify_out);
        if (bench->parsed()) return run_bench(bench_what);
    } catch (const Error& e) {
        return fail_with_report(e, outdir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace mdi
