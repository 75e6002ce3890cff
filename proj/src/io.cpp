#include "interpbound/io.hpp"

#include <cstdio>
#include <ostream>

#include "interpbound/errors.hpp"
#include "interpbound/rng.hpp"

namespace interpbound {

namespace {

// 17 significant digits round-trip any IEEE-754 double.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, int dim, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw InvalidInput(std::string(what) + " must be an array of length " +
                           std::to_string(dim));
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
        if (!j[i].is_number()) throw InvalidInput(std::string(what) + " must be numeric");
        v(i) = j[i].get<double>();
    }
    return v;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i)));
    return rows;
}

} // namespace

SampleSet sample_set_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
    for (const char* key : {"n", "points", "y0", "L"})
        if (!j.contains(key))
            throw InvalidInput(std::string("instance is missing \"") + key + "\"");
    SampleSet s;
    if (!j["n"].is_number_integer()) throw InvalidInput("\"n\" must be an integer");
    s.n = j["n"].get<int>();
    if (s.n <= 0) throw InvalidInput("\"n\" must be positive");
    if (!j["points"].is_array())
        throw InvalidInput("\"points\" must be an array of points");
    for (const auto& p : j["points"])
        s.points.push_back(vector_from_json(p, s.n, "sample point"));
    s.y0 = vector_from_json(j["y0"], s.n, "y0");
    if (!j["L"].is_number()) throw InvalidInput("\"L\" must be numeric");
    s.L = j["L"].get<double>();
    s.validate();
    return s;
}

nlohmann::json to_json(const SampleSet& s) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.points) pts.push_back(vector_to_json(p));
    return {{"n", s.n}, {"points", pts}, {"y0", vector_to_json(s.y0)}, {"L", s.L}};
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["value"] = r.value;
    j["method"] = method_name(r.method);
    j["sharp"] = r.proven_sharp();
    j["mu_min"] = r.mu_min ? nlohmann::json(*r.mu_min) : nlohmann::json(nullptr);
    j["phase1"] = r.phase1_value;
    j["phase2"] = r.phase2_value ? nlohmann::json(*r.phase2_value) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const RegionClassification& c) {
    nlohmann::json j;
    j["tag"] = region_name(c.tag);
    j["permutation"] = c.perm ? nlohmann::json({(*c.perm)[0], (*c.perm)[1], (*c.perm)[2]})
                              : nlohmann::json(nullptr);
    j["boundary"] = c.boundary;
    j["alternate"] = c.alternate ? nlohmann::json(region_name(*c.alternate))
                                 : nlohmann::json(nullptr);
    j["mu_min"] = c.mu_min ? nlohmann::json(*c.mu_min) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json witness_to_json(const WorstCaseFunction& f) {
    nlohmann::json j;
    j["kind"] = witness_kind_name(f.kind);
    j["L"] = f.L;
    j["center"] = vector_to_json(f.center);
    switch (f.kind) {
        case WorstCaseFunction::Kind::SignedSphere:
            j["sign"] = f.sign;
            break;
        case WorstCaseFunction::Kind::QuadraticH:
            j["hessian"] = matrix_to_json(f.hessian);
            break;
        case WorstCaseFunction::Kind::PiecewiseQuadratic:
            j["direction"] = vector_to_json(f.direction);
            break;
    }
    return j;
}

nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"worst_slack", c.margin},
                          {"samples", c.samples},
                          {"pass", c.pass}});
    return {{"checks", checks}, {"worst_slack", r.worst_slack}, {"pass", r.pass}};
}

void write_region_map_csv(std::ostream& out, const RegionMap& map) {
    out << "x,y,class,bound,mu_min,sharp\n";
    for (const auto& c : map.cells) {
        out << fmt(c.x) << ',' << fmt(c.y) << ',';
        if (c.failed) {
            out << "Degenerate,nan,nan,0\n";
            continue;
        }
        out << region_name(c.tag) << ',' << fmt(c.bound) << ',' << fmt(c.mu_min)
            << ',' << (c.sharp ? 1 : 0) << '\n';
    }
}

namespace {

const char* region_color(Region r) {
    switch (r) {
        case Region::ConvexHull: return "#9ecae1";
        case Region::SinglePositive: return "#a1d99b";
        case Region::MuNonnegative: return "#fdd0a2";
        case Region::ObtuseTriangle: return "#de2d26";
        case Region::ObtuseCone: return "#756bb1";
        case Region::MuNegativeUnresolved: return "#636363";
    }
    return "#000000";
}

} // namespace

void write_region_map_svg(std::ostream& out, const RegionMap& map, const SampleSet& s) {
    const int res = map.grid.resolution;
    const double width = 640.0;
    const double height = 640.0;
    double sx = width / (map.grid.xmax - map.grid.xmin);
    double sy = height / (map.grid.ymax - map.grid.ymin);
    auto px = [&](double x) { return (x - map.grid.xmin) * sx; };
    auto py = [&](double y) { return height - (y - map.grid.ymin) * sy; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    double cw = width / (res - 1), ch = height / (res - 1);
    for (const auto& c : map.cells) {
        const char* fill = c.failed ? "#ffffff" : region_color(c.tag);
        out << "<rect x=\"" << px(c.x) - 0.5 * cw << "\" y=\"" << py(c.y) - 0.5 * ch
            << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"" << fill
            << "\"/>\n";
    }
    out << "<polygon points=\"";
    for (const auto& p : s.points) out << px(p(0)) << ',' << py(p(1)) << ' ';
    out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (const auto& p : s.points)
        out << "<circle cx=\"" << px(p(0)) << "\" cy=\"" << py(p(1))
            << "\" r=\"4\" fill=\"black\"/>\n";
    out << "</svg>\n";
}

void write_witness_csv(std::ostream& out, const WorstCaseFunction& f,
                       const SampleSet& s, int samples, std::uint64_t seed) {
    const int n = s.n;
    for (int i = 0; i < n; ++i) out << "u_" << i + 1 << ',';
    out << "value";
    for (int i = 0; i < n; ++i) out << ",grad_" << i + 1;
    out << '\n';

    auto emit = [&](const Eigen::VectorXd& u) {
        auto [v, g] = f.eval(u);
        for (int i = 0; i < n; ++i) out << fmt(u(i)) << ',';
        out << fmt(v);
        for (int i = 0; i < n; ++i) out << ',' << fmt(g(i));
        out << '\n';
    };

    for (const auto& p : s.points) emit(p);
    emit(s.y0);
    auto box = sampling_box(s);
    CounterRng rng(seed, 0x517e55);
    for (int k = 0; k < samples; ++k) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u(i) = rng.uniform(box.first(i), box.second(i));
        emit(u);
    }
}

} // namespace interpbound
