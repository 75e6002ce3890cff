#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "interpbound/cli.hpp"
#include "interpbound/errors.hpp"
#include "interpbound/io.hpp"

#include "support.hpp"

using namespace interpbound;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "interpbound_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_instance(const SampleSet& s, const std::string& name) {
    fs::path p = temp_dir() / name;
    std::ofstream out(p);
    out << to_json(s).dump(2) << '\n';
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(std::vector<std::string> args) {
    std::vector<const char*> argv{"interpbound"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_SUITE("io_cli") {

TEST_CASE("sample set JSON round trip") {
    CounterRng rng(71, 0);
    for (int n : {1, 2, 4}) {
        SampleSet s = random_simplex(n, rng);
        place_anywhere(s, rng);
        SampleSet back = sample_set_from_json(to_json(s));
        CHECK(back.n == s.n);
        CHECK(back.L == s.L);
        CHECK((back.y0 - s.y0).cwiseAbs().maxCoeff() == 0.0);
        for (int i = 0; i <= n; ++i)
            CHECK((back.points[i] - s.points[i]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("malformed instances are rejected") {
    CHECK_THROWS_AS(sample_set_from_json(nlohmann::json::parse("[1,2]")), InvalidInput);
    CHECK_THROWS_AS(sample_set_from_json(nlohmann::json::parse(
                        R"({"n":2,"points":[[0,0],[1,0]],"y0":[0,0],"L":1})")),
                    InvalidInput); // too few points
    CHECK_THROWS_AS(sample_set_from_json(nlohmann::json::parse(
                        R"({"n":2,"points":[[0,0],[1,0],[0,1]],"y0":[0,0],"L":-1})")),
                    InvalidInput); // bad L
    CHECK_THROWS_AS(sample_set_from_json(nlohmann::json::parse(
                        R"({"n":2,"points":[[0,0],[1,0],[0,1]],"y0":[0],"L":1})")),
                    InvalidInput); // bad y0
}

TEST_CASE("bound report JSON carries the contract keys") {
    SampleSet s = obtuse_template();
    BoundReport r = best_bound(s);
    nlohmann::json j = to_json(r);
    for (const char* key : {"value", "method", "sharp", "mu_min", "phase1", "phase2"})
        CHECK(j.contains(key));
    CHECK(j["method"] == "Phase3Triangle");
    CHECK(j["sharp"] == true);
    CHECK(j["value"].get<double>() == r.value); // exact round trip
    CHECK(j["mu_min"].get<double>() == *r.mu_min);
}

TEST_CASE("witness JSON carries the kind parameters") {
    SampleSet s = obtuse_template();
    BoundReport r = best_bound(s);
    REQUIRE(r.witness.has_value());
    nlohmann::json j = witness_to_json(*r.witness);
    CHECK(j["kind"] == "PiecewiseQuadratic");
    CHECK(j.contains("center"));
    CHECK(j.contains("direction"));
    WorstCaseFunction sp = WorstCaseFunction::signed_sphere(1.5, -1.0,
                                                            Eigen::Vector2d(0.0, 1.0));
    CHECK(witness_to_json(sp)["sign"] == -1.0);
}

TEST_CASE("cli bound on the centroid instance") {
    SampleSet s;
    s.n = 2;
    s.points = {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0),
                Eigen::Vector2d(0.0, 0.0)};
    s.y0 = Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0);
    s.L = 1.0;
    fs::path in = write_instance(s, "centroid.json");
    fs::path out = temp_dir() / "centroid_bound.json";
    std::string before = slurp(in);
    CHECK(run({"bound", "--input", in.string(), "--output", out.string()}) == 0);
    CHECK(slurp(in) == before); // input untouched
    nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["method"] == "Waldron");
    CHECK(j["sharp"] == true);
}

TEST_CASE("cli classify and witness") {
    SampleSet s = obtuse_template();
    fs::path in = write_instance(s, "obtuse.json");
    fs::path out = temp_dir() / "obtuse_class.json";
    CHECK(run({"classify", "--input", in.string(), "--output", out.string()}) == 0);
    nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j["tag"] == "ObtuseTriangleRegion");
    CHECK(j["permutation"] == nlohmann::json({0, 1, 2}));

    fs::path wout = temp_dir() / "obtuse_witness.json";
    CHECK(run({"witness", "--input", in.string(), "--output", wout.string(),
               "--samples", "32", "--seed", "5"}) == 0);
    nlohmann::json w = nlohmann::json::parse(slurp(wout));
    CHECK(w["kind"] == "PiecewiseQuadratic");
    CHECK(w["sharp"] == true);
    std::string csv = slurp(fs::path(wout.string() + ".csv"));
    CHECK(csv.rfind("u_1,u_2,value,grad_1,grad_2", 0) == 0);
    // Header + 3 samples + y0 + 32 sampled rows.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 + 1 + 32);
}

TEST_CASE("cli witness falls back to the worst quadratic when not sharp") {
    // A trivariate instance with a negative certificate entry has no
    // attaining witness; the command emits the quadratic-optimal one.
    CounterRng rng(72, 0);
    for (int rep = 0; rep < 3000; ++rep) {
        SampleSet s = random_simplex(3, rng);
        place_anywhere(s, rng);
        BoundReport r;
        try {
            r = best_bound(s);
        } catch (const Error&) {
            continue;
        }
        if (r.proven_sharp()) continue;
        fs::path in = write_instance(s, "unresolved.json");
        fs::path out = temp_dir() / "unresolved_witness.json";
        CHECK(run({"witness", "--input", in.string(), "--output", out.string(),
                   "--samples", "4"}) == 0);
        nlohmann::json j = nlohmann::json::parse(slurp(out));
        CHECK(j["kind"] == "QuadraticH");
        CHECK(j.contains("hessian"));
        CHECK(j["sharp"] == false);
        CHECK(j["achieved_error"].get<double>() <= j["bound"].get<double>() + 1e-9);
        return;
    }
    FAIL("no unresolved trivariate instance found");
}

TEST_CASE("cli verify is deterministic and gates the exit code") {
    SampleSet s = acute_template();
    fs::path in = write_instance(s, "acute.json");
    fs::path out1 = temp_dir() / "verify1.json";
    fs::path out2 = temp_dir() / "verify2.json";
    CHECK(run({"verify", "--input", in.string(), "--output", out1.string(),
               "--samples", "150", "--seed", "7"}) == 0);
    CHECK(run({"verify", "--input", in.string(), "--output", out2.string(),
               "--samples", "150", "--seed", "7"}) == 0);
    CHECK(slurp(out1) == slurp(out2)); // byte-identical reruns
    nlohmann::json j = nlohmann::json::parse(slurp(out1));
    CHECK(j["pass"] == true);
    CHECK(j["checks"].is_array());
    CHECK(j["checks"].size() >= 7);
}

TEST_CASE("cli regionmap emits the documented CSV") {
    SampleSet s = obtuse_template();
    fs::path in = write_instance(s, "obtuse_map.json");
    fs::path out = temp_dir() / "map.csv";
    CHECK(run({"regionmap", "--input", in.string(), "--output", out.string(),
               "--grid", "-5.013,3.487,-2.509,3.491,40", "--svg"}) == 0);
    std::string csv = slurp(out);
    CHECK(csv.rfind("x,y,class,bound,mu_min,sharp", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 40 * 40);
    std::string svg = slurp(fs::path(out.string() + ".svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    CHECK(run({"bound", "--input", (temp_dir() / "missing.json").string()}) == 2);

    fs::path bad = temp_dir() / "bad.json";
    std::ofstream(bad) << "{not json";
    CHECK(run({"bound", "--input", bad.string()}) == 2);

    SampleSet s;
    s.n = 2;
    s.points = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.5, 0.5),
                Eigen::Vector2d(1.0, 1.0)};
    s.y0 = Eigen::Vector2d(0.3, 0.9);
    s.L = 1.0;
    fs::path collinear = temp_dir() / "collinear.json";
    std::ofstream(collinear) << to_json(s).dump() << '\n';
    CHECK(run({"bound", "--input", collinear.string()}) == 3);

    SampleSet ok = acute_template();
    fs::path in = write_instance(ok, "acute2.json");
    CHECK(run({"bound", "--input", in.string(), "--lipschitz", "-2"}) == 2);
}

} // TEST_SUITE
