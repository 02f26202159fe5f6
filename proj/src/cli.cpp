#include "screenbem/cli.hpp"

#include "screenbem/experiments.hpp"
#include "screenbem/io.hpp"
#include "screenbem/parallel.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace screenbem {

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

void config_require(bool ok, const std::string& message)
{
    if (!ok) throw ConfigError(message);
}

// Rejects keys outside `allowed`; keys starting with '_' are comments.
void check_keys(const Json& j, const std::string& where, const std::set<std::string>& allowed)
{
    config_require(j.is_object(), where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!key.empty() && key[0] == '_') continue;
        config_require(allowed.count(key) > 0, where + ": unknown key \"" + key + "\"");
    }
}

template <class T>
T get_or(const Json& j, const std::string& key, const T& fallback, const std::string& where)
{
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

template <class T>
T get_required(const Json& j, const std::string& key, const std::string& where)
{
    config_require(j.contains(key), where + ": missing key \"" + key + "\"");
    return get_or<T>(j, key, T{}, where);
}

const Json& section(const Json& j, const std::string& key, const std::string& where)
{
    config_require(j.contains(key), where + ": missing section \"" + key + "\"");
    return j.at(key);
}

Point parse_point(const Json& j, int dimension, const std::string& where)
{
    config_require(j.is_array() && j.size() == static_cast<std::size_t>(dimension),
                   where + ": expected " + std::to_string(dimension) + " coordinates");
    Point p = Point::Zero();
    for (int c = 0; c < dimension; ++c) {
        config_require(j[c].is_number(), where + ": coordinates must be numbers");
        p[c] = j[c].get<double>();
    }
    return p;
}

Complex parse_complex(const Json& j, const std::string& where)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    config_require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
                   where + ": expected a number or [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Problem parse_problem(const std::string& s, const std::string& where)
{
    if (s == "soft") return Problem::Soft;
    if (s == "hard") return Problem::Hard;
    throw ConfigError(where + ": problem must be \"soft\" or \"hard\"");
}

SwissCheeseParams parse_cheese(const Json& j, int dimension, const std::string& where)
{
    SwissCheeseParams p;
    p.dimension = dimension;
    p.epsilon = get_or<double>(j, "epsilon", p.epsilon, where);
    p.grid_offset = get_or<int>(j, "grid_offset", p.grid_offset, where);
    p.radii = get_or<std::vector<double>>(j, "radii", {}, where);
    if (j.contains("centers")) {
        for (const auto& c : j.at("centers")) {
            const Point q = parse_point(c, dimension == 2 ? 1 : 2, where + ".centers");
            p.centers.emplace_back(q.x(), q.y());
        }
    }
    return p;
}

ScreenRegion parse_region(const Json& j, const std::string& where);

PrefractalFamily parse_family(const Json& j, const std::string& where)
{
    check_keys(j, where,
               {"family", "level", "lambda", "dimension", "epsilon", "grid_offset", "radii", "centers", "base"});
    const auto name = get_required<std::string>(j, "family", where);
    const double lambda = get_or<double>(j, "lambda", 1.0 / 3.0, where);
    PrefractalFamily f;
    if (name == "cantor") {
        f.variant = CantorFamily{lambda};
    } else if (name == "cantor_dust") {
        f.variant = CantorDustFamily{lambda};
    } else if (name == "sierpinski") {
        f.variant = SierpinskiFamily{};
    } else if (name == "koch") {
        f.variant = KochFamily{};
    } else if (name == "swiss_cheese") {
        f.variant = SwissCheeseFamily{parse_cheese(j, get_or<int>(j, "dimension", 3, where), where)};
    } else if (name == "solid_minus_cantor") {
        f.variant = SolidMinusCantorFamily{get_or<int>(j, "dimension", 2, where), lambda};
    } else if (name == "solid_minus_swiss_cheese") {
        f.variant = SolidMinusSwissCheeseFamily{parse_cheese(j, get_or<int>(j, "dimension", 3, where), where)};
    } else if (name == "irregular_circles") {
        f.variant = IrregularCirclesFamily{get_or<int>(j, "grid_offset", 4, where)};
    } else if (name == "grid_inner" || name == "grid_outer") {
        const ScreenRegion base = parse_region(section(j, "base", where), where + ".base");
        if (name == "grid_inner") {
            f.variant = GridInnerFamily{base};
        } else {
            f.variant = GridOuterFamily{base};
        }
    } else {
        throw ConfigError(where + ": unknown family \"" + name + "\"");
    }
    return f;
}

ScreenRegion parse_region(const Json& j, const std::string& where)
{
    config_require(j.is_object(), where + ": expected an object");
    const auto name = get_required<std::string>(j, "family", where);
    if (name == "unit") {
        check_keys(j, where, {"family", "dimension"});
        return unit_screen(get_or<int>(j, "dimension", 2, where));
    }
    const PrefractalFamily f = parse_family(j, where);
    return f.generate(get_required<int>(j, "level", where));
}

QuadratureSpec parse_quadrature(const Json& root, std::optional<int> override_order)
{
    QuadratureSpec q;
    if (root.contains("quadrature")) {
        const Json& j = root.at("quadrature");
        check_keys(j, "quadrature", {"regular", "near", "singular", "near_plane", "near_factor"});
        q.regular = get_or<int>(j, "regular", q.regular, "quadrature");
        q.near = get_or<int>(j, "near", q.near, "quadrature");
        q.singular = get_or<int>(j, "singular", q.singular, "quadrature");
        q.near_plane = get_or<int>(j, "near_plane", q.near_plane, "quadrature");
        q.near_factor = get_or<double>(j, "near_factor", q.near_factor, "quadrature");
    }
    if (override_order) {
        q.regular = *override_order;
        q.singular = *override_order;
    }
    validate(q);
    return q;
}

IncidentField parse_incident(const Json& root, int dimension)
{
    const std::string where = "incident";
    const Json& j = section(root, "incident", "config");
    check_keys(j, where, {"kind", "direction", "source", "amplitude"});
    const auto kind = get_or<std::string>(j, "kind", "plane_wave", where);
    const Complex amplitude = j.contains("amplitude") ? parse_complex(j.at("amplitude"), where + ".amplitude") : 1.0;
    if (kind == "plane_wave") {
        Point d = parse_point(section(j, "direction", where), dimension, where + ".direction");
        config_require(d.norm() > 0.0, where + ".direction: must be non-zero");
        d /= d.norm();
        return plane_wave(dimension, d, amplitude);
    }
    if (kind == "point_source") {
        return point_source(dimension, parse_point(section(j, "source", where), dimension, where + ".source"),
                            amplitude);
    }
    throw ConfigError(where + ": kind must be \"plane_wave\" or \"point_source\"");
}

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<int> threads;
    std::optional<int> quad_order;
    std::uint64_t seed = 0;
};

struct Screen {
    ScreenPanelMesh mesh;
    ScreenRegion region;
};

Screen load_screen(const Json& root, const fs::path& config_dir)
{
    const Json& s = section(root, "screen", "config");
    Screen out;
    if (s.is_object() && s.contains("mesh_file")) {
        check_keys(s, "screen", {"mesh_file"});
        fs::path p = get_required<std::string>(s, "mesh_file", "screen");
        if (p.is_relative()) p = config_dir / p;
        std::ifstream in(p);
        config_require(static_cast<bool>(in), "screen.mesh_file: cannot open " + p.string());
        out.mesh = read_mesh_json(in);
        config_require(!root.contains("mesh"), "config: \"mesh\" is not used with screen.mesh_file");
        return out;
    }
    out.region = parse_region(s, "screen");
    const Json& m = section(root, "mesh", "config");
    check_keys(m, "mesh", {"h", "h_factor"});
    double h = get_or<double>(m, "h", 0.0, "mesh");
    if (h <= 0.0) {
        const double factor = get_or<double>(m, "h_factor", 0.0, "mesh");
        config_require(factor > 0.0, "mesh: give h > 0 or h_factor > 0");
        h = factor * out.region.feature_size();
    }
    out.mesh = mesh(out.region, h);
    return out;
}

std::ofstream open_output(const fs::path& dir, const std::string& name)
{
    fs::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file " + (dir / name).string());
    return f;
}

std::vector<Point> parse_points(const Json& root, int dimension, std::uint64_t seed)
{
    const std::string where = "points";
    const Json& j = section(root, "points", "config");
    check_keys(j, where, {"list", "grid", "ring", "random"});
    std::vector<Point> pts;
    if (j.contains("list")) {
        for (const auto& p : j.at("list")) pts.push_back(parse_point(p, dimension, where + ".list"));
    }
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        check_keys(g, where + ".grid", {"origin", "axes", "lengths", "counts"});
        const Point o = parse_point(section(g, "origin", where + ".grid"), dimension, where + ".grid.origin");
        const auto axes = get_required<std::vector<int>>(g, "axes", where + ".grid");
        const auto lengths = get_required<std::vector<double>>(g, "lengths", where + ".grid");
        const auto counts = get_required<std::vector<int>>(g, "counts", where + ".grid");
        config_require(axes.size() == 2 && lengths.size() == 2 && counts.size() == 2,
                       where + ".grid: axes, lengths and counts need two entries each");
        config_require(axes[0] < dimension && axes[1] < dimension, where + ".grid: axis out of range");
        const auto g_pts = grid_points(o, axes[0], lengths[0], counts[0], axes[1], lengths[1], counts[1]);
        pts.insert(pts.end(), g_pts.begin(), g_pts.end());
    }
    if (j.contains("ring")) {
        const Json& r = j.at("ring");
        check_keys(r, where + ".ring", {"centre", "radius", "count"});
        const Point c = parse_point(section(r, "centre", where + ".ring"), dimension, where + ".ring.centre");
        const auto ring = observation_points(dimension, c, get_required<double>(r, "radius", where + ".ring"),
                                             get_or<int>(r, "count", 16, where + ".ring"));
        pts.insert(pts.end(), ring.begin(), ring.end());
    }
    if (j.contains("random")) {
        const Json& r = j.at("random");
        check_keys(r, where + ".random", {"centre", "radius", "count"});
        const Point c = parse_point(section(r, "centre", where + ".random"), dimension, where + ".random.centre");
        const double radius = get_required<double>(r, "radius", where + ".random");
        const int count = get_required<int>(r, "count", where + ".random");
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        for (int i = 0; i < count; ++i) {
            Point d = Point::Zero();
            for (int c2 = 0; c2 < dimension; ++c2) d[c2] = normal(rng);
            pts.push_back(c + radius * d / d.norm());
        }
    }
    config_require(!pts.empty(), where + ": no evaluation points given");
    return pts;
}

std::vector<Point> parse_directions(const Json& root, int dimension)
{
    const std::string where = "directions";
    const Json& j = section(root, "directions", "config");
    check_keys(j, where, {"count", "list"});
    if (j.contains("list")) {
        std::vector<Point> out;
        for (const auto& d : j.at("list")) {
            Point p = parse_point(d, dimension, where + ".list");
            config_require(p.norm() > 0.0, where + ".list: zero direction");
            out.push_back(p / p.norm());
        }
        return out;
    }
    return unit_directions(dimension, get_or<int>(j, "count", 64, where));
}

ExperimentSettings parse_settings(const Json& root, int dimension, const Options& opt)
{
    ExperimentSettings s;
    s.problem = parse_problem(get_or<std::string>(root, "problem", "soft", "config"), "problem");
    s.k = get_required<double>(root, "k", "config");
    s.field = parse_incident(root, dimension);
    s.quad = parse_quadrature(root, opt.quad_order);
    if (root.contains("mesh")) {
        const Json& m = root.at("mesh");
        check_keys(m, "mesh", {"h", "h_factor"});
        s.h = get_or<double>(m, "h", 0.0, "mesh");
        s.h_factor = get_or<double>(m, "h_factor", s.h_factor, "mesh");
    }
    if (root.contains("observation")) {
        const Json& o = root.at("observation");
        check_keys(o, "observation", {"count", "radius_factor"});
        s.obs_count = get_or<int>(o, "count", s.obs_count, "observation");
        s.obs_radius_factor = get_or<double>(o, "radius_factor", s.obs_radius_factor, "observation");
    }
    s.max_dofs = get_or<std::size_t>(root, "max_dofs", s.max_dofs, "config");
    s.record_timings = get_or<bool>(root, "record_timings", false, "config");
    validate(s);
    return s;
}

std::pair<int, int> parse_levels(const Json& root)
{
    const Json& l = section(root, "levels", "config");
    check_keys(l, "levels", {"first", "last"});
    return {get_required<int>(l, "first", "levels"), get_required<int>(l, "last", "levels")};
}

HoleSpec parse_hole(const Json& root)
{
    const Json& j = section(root, "hole", "config");
    check_keys(j, "hole", {"kind", "dimension", "lambda", "epsilon", "grid_offset", "radii", "centers"});
    HoleSpec h;
    const auto kind = get_or<std::string>(j, "kind", "cantor", "hole");
    h.dimension = get_or<int>(j, "dimension", 2, "hole");
    config_require(h.dimension == 2 || h.dimension == 3, "hole.dimension must be 2 or 3");
    if (kind == "cantor") {
        h.kind = HoleSpec::Kind::Cantor;
        h.lambda = get_or<double>(j, "lambda", h.lambda, "hole");
    } else if (kind == "swiss_cheese") {
        h.kind = HoleSpec::Kind::SwissCheese;
        h.cheese = parse_cheese(j, h.dimension, "hole");
    } else {
        throw ConfigError("hole.kind must be \"cantor\" or \"swiss_cheese\"");
    }
    return h;
}

const std::map<std::string, std::set<std::string>>& allowed_top_level()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"mesh", {"command", "screen", "mesh"}},
        {"solve", {"command", "screen", "mesh", "problem", "k", "incident", "quadrature", "dump_matrix"}},
        {"field",
         {"command", "screen", "mesh", "problem", "k", "incident", "quadrature", "points", "content"}},
        {"farfield", {"command", "screen", "mesh", "problem", "k", "incident", "quadrature", "directions"}},
        {"converge",
         {"command", "family", "levels", "problem", "k", "incident", "mesh", "quadrature", "observation", "max_dofs",
          "record_timings"}},
        {"null",
         {"command", "family", "levels", "problem", "k", "incident", "mesh", "quadrature", "observation", "max_dofs",
          "record_timings"}},
        {"hole",
         {"command", "hole", "levels", "problems", "k", "incident", "mesh", "quadrature", "observation", "max_dofs",
          "record_timings"}},
        {"gap",
         {"command", "hole", "level", "directions", "problem", "k", "incident", "mesh", "quadrature", "observation",
          "max_dofs", "near_zero_tolerance"}},
    };
    return keys;
}

DensitySolution solve_from(const Json& root, const Screen& screen, const Options& opt, std::ostream& out,
                           const fs::path& out_dir, bool dump)
{
    const Problem problem = parse_problem(get_or<std::string>(root, "problem", "soft", "config"), "problem");
    const double k = get_required<double>(root, "k", "config");
    config_require(k > 0.0, "k must be positive");
    const IncidentField field = parse_incident(root, screen.mesh.dimension);
    const QuadratureSpec quad = parse_quadrature(root, opt.quad_order);
    if (dump && root.contains("dump_matrix")) {
        const auto format = get_or<std::string>(root, "dump_matrix", "json", "config");
        config_require(format == "json" || format == "binary", "dump_matrix must be \"json\" or \"binary\"");
        const GalerkinSystem sys = problem == Problem::Soft ? assemble_single_layer(screen.mesh, Wavenumber(k), quad)
                                                            : assemble_hypersingular(screen.mesh, Wavenumber(k), quad);
        if (format == "json") {
            auto f = open_output(out_dir, "matrix.json");
            write_matrix_json(f, sys.matrix);
        } else {
            auto f = open_output(out_dir, "matrix.bin");
            write_matrix_binary(f, sys.matrix);
        }
    }
    DensitySolution s = solve(problem, screen.mesh, Wavenumber(k), field, quad);
    out << "solved " << to_string(problem) << " problem: " << s.basis.dimension() << " unknowns, residual "
        << s.residual_inf << '\n';
    return s;
}

int run_command(const std::string& cmd, const Options& opt, std::ostream& out)
{
    std::ifstream in(opt.config_path);
    config_require(static_cast<bool>(in), "cannot open config file " + opt.config_path);
    Json root;
    try {
        root = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + opt.config_path + " is not valid JSON: " + e.what());
    }
    check_keys(root, "config", allowed_top_level().at(cmd));
    if (root.contains("command")) {
        config_require(root.at("command") == cmd, "config: \"command\" does not match the subcommand");
    }
    const fs::path config_dir = fs::path(opt.config_path).parent_path();
    const fs::path out_dir = opt.out_dir;
    const std::string echo = root.dump();

    if (cmd == "mesh") {
        const Screen s = load_screen(root, config_dir);
        auto f = open_output(out_dir, "mesh.json");
        write_mesh_json(f, s.mesh);
        out << "mesh: " << s.mesh.panel_count() << " panels, hash " << mesh_hash(s.mesh) << '\n';
        return kExitOk;
    }
    if (cmd == "solve") {
        const Screen s = load_screen(root, config_dir);
        const DensitySolution sol = solve_from(root, s, opt, out, out_dir, true);
        auto f = open_output(out_dir, "density.json");
        write_density_json(f, sol);
        return kExitOk;
    }
    if (cmd == "field") {
        const Screen s = load_screen(root, config_dir);
        const auto pts = parse_points(root, s.mesh.dimension, opt.seed);
        const auto content = get_or<std::string>(root, "content", "scattered", "config");
        config_require(content == "scattered" || content == "total" || content == "incident",
                       "content must be scattered, total or incident");
        const DensitySolution sol = solve_from(root, s, opt, out, out_dir, false);
        const FieldGrid g = content == "scattered" ? scattered_field(s.mesh, sol, pts)
                            : content == "total"   ? total_field(s.mesh, sol, pts)
                                                   : incident_field(sol.field, pts, Wavenumber(sol.k));
        auto csv = open_output(out_dir, "field.csv");
        write_field_csv(csv, g);
        auto js = open_output(out_dir, "field.json");
        write_field_json(js, g);
        return kExitOk;
    }
    if (cmd == "farfield") {
        const Screen s = load_screen(root, config_dir);
        const auto dirs = parse_directions(root, s.mesh.dimension);
        const DensitySolution sol = solve_from(root, s, opt, out, out_dir, false);
        const FarFieldPattern p = far_field(s.mesh, sol, dirs);
        auto csv = open_output(out_dir, "farfield.csv");
        write_far_field_csv(csv, p);
        auto js = open_output(out_dir, "farfield.json");
        write_far_field_json(js, p);
        return kExitOk;
    }
    if (cmd == "converge" || cmd == "null") {
        const Json& fam = section(root, "family", "config");
        const PrefractalFamily family = parse_family(fam, "family");
        config_require(!fam.contains("level"), "family: levels are given by the \"levels\" section");
        const auto [first, last] = parse_levels(root);
        const ExperimentSettings s = parse_settings(root, family.dimension(), opt);
        const ConvergenceReport r =
            cmd == "converge" ? converge_prefractal(family, first, last, s) : null_test(family, first, last, s);
        auto csv = open_output(out_dir, cmd + ".csv");
        write_report_csv(csv, r);
        auto js = open_output(out_dir, cmd + ".json");
        write_report_json(js, r, echo);
        out << cmd << ": " << r.measured_trend << '\n';
        return kExitOk;
    }
    if (cmd == "hole") {
        const HoleSpec hole = parse_hole(root);
        const auto [first, last] = parse_levels(root);
        const auto problems = get_or<std::vector<std::string>>(root, "problems", {"soft", "hard"}, "config");
        config_require(!problems.empty(), "problems: list is empty");
        std::ostringstream csv_body;
        Json reports = Json::array();
        for (std::size_t i = 0; i < problems.size(); ++i) {
            Json copy = root;
            copy.erase("problems");
            copy["problem"] = problems[i];
            const ExperimentSettings s = parse_settings(copy, hole.dimension, opt);
            const HoleReport r = hole_effect(hole, first, last, s);
            std::ostringstream one;
            write_report_csv(one, r);
            const std::string text = one.str();
            csv_body << (i == 0 ? text : text.substr(text.find('\n') + 1));
            std::ostringstream js;
            write_report_json(js, r, "");
            Json parsed = Json::parse(js.str());
            parsed.erase("config");
            reports.push_back(parsed);
            out << "hole (" << problems[i] << "): " << r.measured_trend << '\n';
        }
        auto csv = open_output(out_dir, "hole.csv");
        csv << csv_body.str();
        Json env;
        env["experiment"] = "hole";
        env["reports"] = reports;
        env["config"] = root;
        auto js = open_output(out_dir, "hole.json");
        js << env.dump(2) << '\n';
        return kExitOk;
    }
    if (cmd == "gap") {
        const HoleSpec hole = parse_hole(root);
        const int level = get_required<int>(root, "level", "config");
        int count = 16;
        if (root.contains("directions")) {
            const Json& d = root.at("directions");
            check_keys(d, "directions", {"count"});
            count = get_or<int>(d, "count", count, "directions");
        }
        Json copy = root;
        if (!copy.contains("problem")) copy["problem"] = "hard";
        const ExperimentSettings s = parse_settings(copy, hole.dimension, opt);
        const GapReport r =
            formulation_gap(hole, level, count, s, get_or<double>(root, "near_zero_tolerance", 1e-3, "config"));
        auto csv = open_output(out_dir, "gap.csv");
        write_report_csv(csv, r);
        auto js = open_output(out_dir, "gap.json");
        write_report_json(js, r, echo);
        out << "gap: " << r.measured_trend << '\n';
        return kExitOk;
    }
    throw ConfigError("unknown subcommand " + cmd);
}

}  // namespace

std::string example_config(const std::string& subcommand)
{
    Json j;
    j["_comment"] = "Keys starting with '_' are ignored. Coordinates have n entries (n = 2 or 3).";
    j["command"] = subcommand;
    const Json incident = {{"_comment", "plane_wave needs direction; point_source needs source (off x_n = 0)"},
                           {"kind", "plane_wave"},
                           {"direction", {0.0, -1.0}},
                           {"amplitude", {1.0, 0.0}}};
    const Json quadrature = {{"_comment", "Gauss points per coordinate"},
                             {"regular", 5},
                             {"near", 10},
                             {"singular", 8},
                             {"near_plane", 16},
                             {"near_factor", 1.0}};
    const Json screen = {{"_comment",
                          "family: cantor, cantor_dust, sierpinski, koch, swiss_cheese, solid_minus_cantor, "
                          "solid_minus_swiss_cheese, irregular_circles, grid_inner, grid_outer, unit; "
                          "or {\"mesh_file\": path}"},
                         {"family", "cantor"},
                         {"lambda", 1.0 / 3.0},
                         {"level", 3}};
    const Json mesh = {{"_comment", "absolute h, or h_factor times the largest cell diameter"}, {"h_factor", 0.5}};
    if (subcommand == "mesh") {
        j["screen"] = screen;
        j["mesh"] = mesh;
    } else if (subcommand == "solve" || subcommand == "field" || subcommand == "farfield") {
        j["screen"] = screen;
        j["mesh"] = mesh;
        j["problem"] = "soft";
        j["k"] = 5.0;
        j["incident"] = incident;
        j["quadrature"] = quadrature;
        if (subcommand == "solve") j["_dump_matrix"] = "set dump_matrix to json or binary to write the matrix";
        if (subcommand == "field") {
            j["content"] = "scattered";
            j["points"] = {{"_comment", "any of list, grid, ring, random (random uses --seed)"},
                           {"grid", {{"origin", {-1.0, 0.5}}, {"axes", {0, 1}}, {"lengths", {3.0, 2.0}}, {"counts", {31, 21}}}}};
        }
        if (subcommand == "farfield") j["directions"] = {{"count", 64}};
    } else if (subcommand == "converge" || subcommand == "null") {
        j["family"] = {{"family", "cantor"}, {"lambda", 1.0 / 3.0}};
        j["levels"] = {{"first", 2}, {"last", 6}};
        j["problem"] = "soft";
        j["k"] = 5.0;
        j["incident"] = incident;
        j["mesh"] = mesh;
        j["quadrature"] = quadrature;
        j["observation"] = {{"_comment", "ring/sphere of radius radius_factor x screen diameter"},
                            {"count", 16},
                            {"radius_factor", 2.0}};
        j["max_dofs"] = 8000;
    } else if (subcommand == "hole" || subcommand == "gap") {
        j["hole"] = {{"kind", "cantor"}, {"dimension", 2}, {"lambda", 1.0 / 3.0}};
        if (subcommand == "hole") {
            j["levels"] = {{"first", 0}, {"last", 5}};
            j["problems"] = {"soft", "hard"};
        } else {
            j["level"] = 3;
            j["problem"] = "hard";
            j["directions"] = {{"count", 16}};
        }
        j["k"] = 10.0;
        j["incident"] = incident;
        j["mesh"] = {{"_comment", "common h = h_factor x smallest cell at the last level"}, {"h_factor", 0.25}};
        j["quadrature"] = quadrature;
        j["observation"] = {{"count", 16}, {"radius_factor", 2.0}};
    } else {
        throw ConfigError("unknown subcommand " + subcommand);
    }
    return j.dump(2) + "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Galerkin boundary elements for acoustic scattering by planar fractal screens", "screenbem"};
    Options opt;
    int threads = 0;
    int quad_order = 0;
    std::string example;
    app.add_option("--config", opt.config_path, "JSON configuration file");
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (fallback: SCREENBEM_THREADS)");
    app.add_option("--quad-order", quad_order, "override regular and singular Gauss orders");
    app.add_option("--seed", opt.seed, "seed for randomly placed evaluation points");
    app.add_option("--print-example", example, "print a commented configuration template for a subcommand");
    app.fallthrough();
    const std::vector<std::string> commands{"mesh", "solve", "field", "farfield", "converge", "null", "hole", "gap"};
    for (const auto& c : commands) app.add_subcommand(c, "run the " + c + " pipeline")->fallthrough();

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (!example.empty()) {
            out << example_config(example);
            return kExitOk;
        }
        std::string cmd;
        for (const auto& c : commands)
            if (app.got_subcommand(c)) cmd = c;
        config_require(!cmd.empty(), "no subcommand given (one of mesh, solve, field, farfield, converge, null, hole, gap)");
        config_require(!opt.config_path.empty(), "--config PATH is required");
        if (threads > 0) set_thread_count(static_cast<std::size_t>(threads));
        config_require(threads >= 0, "--threads must be positive");
        if (quad_order != 0) {
            config_require(quad_order >= 1, "--quad-order must be positive");
            opt.quad_order = quad_order;
        }
        return run_command(cmd, opt, out);
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InvalidInput& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitOther;
    }
}

}  // namespace screenbem
