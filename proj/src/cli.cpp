#include "interpbound/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "interpbound/bounds.hpp"
#include "interpbound/errors.hpp"
#include "interpbound/io.hpp"
#include "interpbound/oracle.hpp"

namespace interpbound {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitDegenerate = 3;

struct Options {
    std::string input;
    std::string output;
    std::optional<double> lipschitz;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    int samples = 1000;
    std::vector<double> grid; // xmin, xmax, ymin, ymax, resolution
    bool svg = false;
};

SampleSet load_instance(const Options& opt) {
    std::ifstream in(opt.input);
    if (!in) throw InvalidInput("cannot open input file: " + opt.input);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("input is not valid JSON: ") + e.what());
    }
    SampleSet s = sample_set_from_json(j);
    if (opt.lipschitz) {
        s.L = *opt.lipschitz;
        s.validate();
    }
    return s;
}

Tolerances tolerances(const Options& opt) {
    Tolerances t;
    if (opt.tol) {
        if (!(*opt.tol > 0.0)) throw InvalidInput("--tol must be positive");
        t.sign_rel = *opt.tol;
    }
    return t;
}

void emit(const Options& opt, const std::string& text) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (opt.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(opt.output);
    if (!out) throw InvalidInput("cannot open output file: " + opt.output);
    out << body;
}

GridSpec parse_grid(const Options& opt) {
    if (opt.grid.size() != 5)
        throw InvalidInput("--grid expects xmin,xmax,ymin,ymax,resolution");
    GridSpec g;
    g.xmin = opt.grid[0];
    g.xmax = opt.grid[1];
    g.ymin = opt.grid[2];
    g.ymax = opt.grid[3];
    g.resolution = static_cast<int>(opt.grid[4]);
    if (!(g.xmax > g.xmin) || !(g.ymax > g.ymin))
        throw InvalidInput("--grid bounds must be increasing");
    if (g.resolution < 2) throw InvalidInput("--grid resolution must be at least 2");
    return g;
}

int cmd_bound(const Options& opt) {
    SampleSet s = load_instance(opt);
    BoundReport rep = best_bound(s, tolerances(opt));
    emit(opt, to_json(rep).dump(2));
    return kExitOk;
}

int cmd_classify(const Options& opt) {
    SampleSet s = load_instance(opt);
    ClassifiedBound cb = classify_and_bound(s, tolerances(opt));
    emit(opt, to_json(cb.region).dump(2));
    return kExitOk;
}

int cmd_witness(const Options& opt) {
    SampleSet s = load_instance(opt);
    ClassifiedBound cb = classify_and_bound(s, tolerances(opt));
    // Every report carries a witness candidate: the sharp regions attach
    // the attaining function, otherwise fall back to the worst quadratic.
    WorstCaseFunction f = cb.report.witness
                              ? *cb.report.witness
                              : WorstCaseFunction::quadratic(
                                    s.L,
                                    hstar_spectral(moment_matrix(s, barycentric(s, tolerances(opt)),
                                                                 tolerances(opt)),
                                                   s.L)
                                        .H,
                                    s.y0);
    nlohmann::json j = witness_to_json(f);
    j["achieved_error"] = achieved_error(f, s, tolerances(opt));
    j["bound"] = cb.report.value;
    j["sharp"] = cb.report.proven_sharp();
    emit(opt, j.dump(2));

    if (!opt.output.empty()) {
        std::string csv_path = opt.output + ".csv";
        std::ofstream csv(csv_path);
        if (!csv) throw InvalidInput("cannot open output file: " + csv_path);
        write_witness_csv(csv, f, s, opt.samples, opt.seed);
    }
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    SampleSet s = load_instance(opt);
    VerifyReport rep = verify_instance(s, opt.samples, opt.seed, tolerances(opt));
    emit(opt, to_json(rep).dump(2));
    return rep.pass ? kExitOk : kExitCheckFailed;
}

int cmd_regionmap(const Options& opt) {
    SampleSet s = load_instance(opt);
    GridSpec grid = parse_grid(opt);
    RegionMap map = sweep_region_map(s, grid, tolerances(opt));

    std::ostringstream csv;
    write_region_map_csv(csv, map);
    emit(opt, csv.str());

    if (opt.svg) {
        std::string svg_path = opt.output.empty() ? "regionmap.svg" : opt.output + ".svg";
        std::ofstream svg(svg_path);
        if (!svg) throw InvalidInput("cannot open output file: " + svg_path);
        write_region_map_svg(svg, map, s);
    }

    std::cerr << "negative-mu components: " << count_negative_mu_components(map)
              << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"sharp error bounds for linear interpolation and extrapolation "
                 "of functions with Lipschitz gradients"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd, bool needs_output) {
        cmd->add_option("--input", opt.input, "instance JSON file")->required();
        auto* o = cmd->add_option("--output", opt.output, "output file (default: stdout)");
        if (needs_output) o->required();
        cmd->add_option("--lipschitz", [&opt](const CLI::results_t& r) {
            double v = 0.0;
            if (!CLI::detail::lexical_cast(r[0], v)) return false;
            opt.lipschitz = v;
            return true;
        }, "override the Lipschitz constant L");
        cmd->add_option("--tol", [&opt](const CLI::results_t& r) {
            double v = 0.0;
            if (!CLI::detail::lexical_cast(r[0], v)) return false;
            opt.tol = v;
            return true;
        }, "override the relative sign tolerance");
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_option("--samples", opt.samples, "sample count")
            ->check(CLI::PositiveNumber);
    };

    auto* bound = app.add_subcommand("bound", "compute the best certified bound");
    add_common(bound, false);
    auto* classify = app.add_subcommand("classify", "classify the instance region");
    add_common(classify, false);
    auto* witness = app.add_subcommand("witness", "emit the worst-case function");
    add_common(witness, false);
    auto* verify = app.add_subcommand("verify", "run the numerical check battery");
    add_common(verify, false);
    auto* regionmap = app.add_subcommand("regionmap", "raster classification over a grid");
    add_common(regionmap, false);
    regionmap->add_option("--grid", opt.grid, "xmin,xmax,ymin,ymax,resolution")
        ->required()
        ->delimiter(',')
        ->expected(5);
    regionmap->add_flag("--svg", opt.svg, "also write an SVG raster");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        if (bound->parsed()) return cmd_bound(opt);
        if (classify->parsed()) return cmd_classify(opt);
        if (witness->parsed()) return cmd_witness(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (regionmap->parsed()) return cmd_regionmap(opt);
        return kExitInvalidInput;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    }
}

} // namespace interpbound
