#include "screenbem/experiments.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace screenbem {

namespace {

using Json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double max_difference(const std::vector<Complex>& a, const std::vector<Complex>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double max_abs(const std::vector<Complex>& v)
{
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

struct Solved {
    ScreenPanelMesh mesh;
    DensitySolution solution;
    std::vector<Complex> values;
};

Solved solve_region(const ScreenRegion& region, double h, const ExperimentSettings& s, const IncidentField& field,
                    const std::vector<Point>& obs)
{
    Solved out;
    out.mesh.dimension = region.dimension;
    if (region.empty()) {
        out.solution.problem = s.problem;
        out.solution.basis = make_basis(out.mesh, basis_for(s.problem));
        out.solution.k = s.k;
        out.solution.field = field;
        out.solution.quadrature = s.quad;
        out.values.assign(obs.size(), 0.0);
        return out;
    }
    out.mesh = mesh(region, h);
    const std::size_t dofs = make_basis(out.mesh, basis_for(s.problem)).dimension();
    if (dofs > s.max_dofs) {
        throw InvalidInput("discretization needs " + std::to_string(dofs) + " unknowns, above the cap of " +
                           std::to_string(s.max_dofs));
    }
    out.solution = solve(s.problem, out.mesh, Wavenumber(s.k), field, s.quad);
    out.values = scattered_field(out.mesh, out.solution, obs).values;
    return out;
}

Json point_json(const Point& p, int dim)
{
    Json a = Json::array();
    for (int c = 0; c < dim; ++c) a.push_back(p[c]);
    return a;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json field_json(const IncidentField& f)
{
    Json j;
    j["kind"] = f.kind == IncidentKind::PlaneWave ? "plane_wave" : "point_source";
    if (f.kind == IncidentKind::PlaneWave) {
        j["direction"] = point_json(f.direction, f.dimension);
    } else {
        j["source"] = point_json(f.source, f.dimension);
    }
    j["amplitude"] = complex_json(f.amplitude);
    return j;
}

Json settings_json(const ExperimentSettings& s)
{
    Json j;
    j["problem"] = to_string(s.problem);
    j["k"] = s.k;
    j["incident"] = field_json(s.field);
    j["quadrature"] = {{"regular", s.quad.regular},
                       {"near", s.quad.near},
                       {"singular", s.quad.singular},
                       {"near_plane", s.quad.near_plane},
                       {"near_factor", s.quad.near_factor}};
    j["h_factor"] = s.h_factor;
    j["h"] = s.h;
    j["max_dofs"] = s.max_dofs;
    j["observation_count"] = s.obs_count;
    j["observation_radius_factor"] = s.obs_radius_factor;
    return j;
}

Json nan_or(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

Json hole_json(const HoleSpec& h)
{
    Json j;
    j["kind"] = h.kind == HoleSpec::Kind::Cantor ? "cantor" : "swiss_cheese";
    j["dimension"] = h.dimension;
    if (h.kind == HoleSpec::Kind::Cantor) {
        j["lambda"] = h.lambda;
    } else {
        j["epsilon"] = h.cheese.epsilon;
        j["grid_offset"] = h.cheese.grid_offset;
    }
    return j;
}

bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

void envelope(std::ostream& os, Json& j, const std::string& config_json)
{
    j["config"] = config_json.empty() ? Json(nullptr) : Json::parse(config_json);
    os << j.dump(2) << '\n';
}

}  // namespace

void validate(const ExperimentSettings& s)
{
    require(std::isfinite(s.k) && s.k > 0.0, "wavenumber must be positive");
    validate(s.field);
    validate(s.quad);
    require(s.h_factor > 0.0 || s.h > 0.0, "mesh rule needs h_factor > 0 or h > 0");
    require(s.h >= 0.0, "h must be non-negative");
    require(s.obs_count >= 1, "observation count must be positive");
    require(s.obs_radius_factor > 0.5, "observation radius factor must exceed 1/2");
    require(s.max_dofs >= 1, "max_dofs must be positive");
}

std::vector<Point> observation_points(int dimension, const Point& centre, double radius, int count)
{
    std::vector<Point> out;
    for (const auto& d : unit_directions(dimension, count)) out.push_back(centre + radius * d);
    return out;
}

ConvergenceReport converge_prefractal(const PrefractalFamily& family, int first_level, int last_level,
                                      const ExperimentSettings& settings)
{
    validate(settings);
    require(family.dimension() == settings.field.dimension, "family and incident field dimensions differ");
    require(first_level >= family.first_level(), "first level below the family's first level");
    require(last_level >= first_level, "level range is empty");

    ConvergenceReport rep;
    rep.experiment = "converge";
    rep.family = family.name();
    rep.settings = settings;

    std::vector<ScreenRegion> regions;
    Point lo = Point::Constant(INFINITY), hi = Point::Constant(-INFINITY);
    for (int j = first_level; j <= last_level; ++j) {
        regions.push_back(family.generate(j));
        if (!regions.back().empty()) {
            const auto [a, b] = regions.back().bounding_box();
            lo = lo.cwiseMin(a);
            hi = hi.cwiseMax(b);
        }
    }
    require(std::isfinite(lo.x()), "every level of the family is empty");
    const double diameter = (hi - lo).norm();
    rep.observation_points =
        observation_points(family.dimension(), 0.5 * (lo + hi), settings.obs_radius_factor * diameter, settings.obs_count);

    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        LevelResult row;
        row.level = first_level + static_cast<int>(i);
        row.feature_size = regions[i].feature_size();
        row.h = settings.h > 0.0 ? settings.h : settings.h_factor * row.feature_size;
        const Solved s = solve_region(regions[i], row.h, settings, settings.field, rep.observation_points);
        row.panels = s.mesh.panel_count();
        row.dofs = s.solution.basis.dimension();
        row.mesh_hash = mesh_hash(s.mesh);
        row.values = s.values;
        row.max_abs = max_abs(s.values);
        row.residual = s.solution.residual_inf;
        if (i > 0) {
            row.difference = max_difference(s.values, rep.levels.back().values);
            if (i > 1) row.ratio = row.difference / rep.levels.back().difference;
        }
        row.seconds = seconds_since(t0);
        rep.levels.push_back(row);
    }

    std::vector<double> diffs, maxima;
    for (const auto& l : rep.levels) {
        if (!std::isnan(l.difference)) diffs.push_back(l.difference);
        maxima.push_back(l.max_abs);
    }
    rep.differences_decreasing = diffs.size() >= 2 && strictly_decreasing(diffs);
    rep.max_abs_decreasing = maxima.size() >= 2 && strictly_decreasing(maxima);
    if (rep.levels.front().max_abs > 0.0) rep.final_ratio = rep.levels.back().max_abs / rep.levels.front().max_abs;
    rep.asymptotic_claim = "u^s_j converges uniformly on compact subsets of the exterior as j -> infinity";
    std::ostringstream trend;
    trend << "successive differences " << (rep.differences_decreasing ? "strictly decreasing" : "not monotone");
    if (diffs.size() >= 2) trend << ", last ratio " << num(diffs.back() / diffs[diffs.size() - 2]);
    rep.measured_trend = trend.str();
    return rep;
}

ConvergenceReport null_test(const PrefractalFamily& family, int first_level, int last_level,
                            const ExperimentSettings& settings)
{
    ConvergenceReport rep = converge_prefractal(family, first_level, last_level, settings);
    rep.experiment = "null";
    rep.asymptotic_claim = "the limiting scattered field is zero: u^s_j -> 0 uniformly on compact subsets";
    std::ostringstream trend;
    trend << "max |u^s_j| " << (rep.max_abs_decreasing ? "strictly decreasing" : "not monotone")
          << ", final/initial ratio " << num(rep.final_ratio);
    rep.measured_trend = trend.str();
    return rep;
}

ScreenRegion punctured_screen(const HoleSpec& hole, int level)
{
    require(level >= 0, "level must be non-negative");
    if (level == 0) return unit_screen(hole.dimension);
    if (hole.kind == HoleSpec::Kind::Cantor) return solid_minus_cantor(hole.dimension, hole.lambda, level);
    SwissCheeseParams p = hole.cheese;
    p.dimension = hole.dimension;
    return solid_minus_swiss_cheese(level, p);
}

namespace {

double smallest_cell(const ScreenRegion& r)
{
    double f = INFINITY;
    if (r.dimension == 2) {
        for (const auto& c : r.intervals) f = std::min(f, c.length());
    } else {
        for (const auto& p : r.polygons) f = std::min(f, p.diameter());
    }
    return f;
}

std::vector<Point> unit_screen_ring(int dimension, const ExperimentSettings& s)
{
    const auto [lo, hi] = unit_screen(dimension).bounding_box();
    return observation_points(dimension, 0.5 * (lo + hi), s.obs_radius_factor * (hi - lo).norm(), s.obs_count);
}

double common_mesh_size(const HoleSpec& hole, int last_level, const ExperimentSettings& s)
{
    if (s.h > 0.0) return s.h;
    const ScreenRegion finest = punctured_screen(hole, last_level);
    require(!finest.empty(), "punctured screen is empty at the last level");
    return s.h_factor * smallest_cell(finest);
}

}  // namespace

HoleReport hole_effect(const HoleSpec& hole, int first_level, int last_level, const ExperimentSettings& settings)
{
    validate(settings);
    require(hole.dimension == settings.field.dimension, "hole and incident field dimensions differ");
    require(first_level >= 0 && last_level >= first_level, "invalid level range");
    HoleReport rep;
    rep.hole = hole;
    rep.settings = settings;
    rep.h = common_mesh_size(hole, last_level, settings);
    rep.observation_points = unit_screen_ring(hole.dimension, settings);

    const Solved reference = solve_region(unit_screen(hole.dimension), rep.h, settings, settings.field,
                                          rep.observation_points);
    rep.reference_panels = reference.mesh.panel_count();
    rep.reference_hash = mesh_hash(reference.mesh);

    for (int j = first_level; j <= last_level; ++j) {
        const auto t0 = std::chrono::steady_clock::now();
        HoleRow row;
        row.level = j;
        const Solved s = j == 0 ? reference
                                : solve_region(punctured_screen(hole, j), rep.h, settings, settings.field,
                                               rep.observation_points);
        row.panels = s.mesh.panel_count();
        row.dofs = s.solution.basis.dimension();
        row.mesh_hash = mesh_hash(s.mesh);
        row.delta = max_difference(s.values, reference.values);
        row.max_abs = max_abs(s.values);
        row.residual = s.solution.residual_inf;
        row.seconds = seconds_since(t0);
        rep.rows.push_back(row);
    }
    rep.asymptotic_claim = settings.problem == Problem::Soft
                               ? "sound-soft: the hole has no effect, delta_j -> 0"
                               : "sound-hard: the hole has an effect, delta_j tends to a positive limit";
    std::vector<double> deltas;
    for (const auto& r : rep.rows)
        if (r.level > 0) deltas.push_back(r.delta);
    std::ostringstream trend;
    if (deltas.size() >= 2) {
        trend << "delta " << (strictly_decreasing(deltas) ? "strictly decreasing" : "not monotone")
              << ", last/first ratio " << num(deltas.back() / deltas.front());
    } else {
        trend << "fewer than two punctured levels";
    }
    rep.measured_trend = trend.str();
    return rep;
}

GapReport formulation_gap(const HoleSpec& hole, int level, int direction_count, const ExperimentSettings& settings,
                          double near_zero_tolerance)
{
    validate(settings);
    require(level >= 1, "formulation gap needs a punctured level >= 1");
    require(direction_count >= 1, "direction count must be positive");
    GapReport rep;
    rep.hole = hole;
    rep.level = level;
    rep.settings = settings;
    rep.h = common_mesh_size(hole, level, settings);
    rep.observation_points = unit_screen_ring(hole.dimension, settings);

    const int dim = hole.dimension;
    const Wavenumber k(settings.k);
    const ScreenPanelMesh punctured = mesh(punctured_screen(hole, level), rep.h);
    const ScreenPanelMesh solid = mesh(unit_screen(dim), rep.h);

    // Factor each system once and reuse it for every direction.
    struct Prepared {
        const ScreenPanelMesh* mesh;
        GalerkinSystem sys;
        Eigen::PartialPivLU<ComplexMatrix> lu;
        bool empty = false;
    };
    auto prepare = [&](const ScreenPanelMesh& m) {
        Prepared p;
        p.mesh = &m;
        p.sys.basis = make_basis(m, basis_for(settings.problem));
        if (p.sys.basis.dimension() == 0) {
            p.empty = true;
            p.sys.problem = settings.problem;
            p.sys.k = settings.k;
            p.sys.quadrature = settings.quad;
            return p;
        }
        require(p.sys.basis.dimension() <= settings.max_dofs, "discretization exceeds max_dofs");
        p.sys = settings.problem == Problem::Soft ? assemble_single_layer(m, k, settings.quad)
                                                  : assemble_hypersingular(m, k, settings.quad);
        lu_solve(p.sys.matrix, ComplexVector::Zero(p.sys.matrix.rows()));  // pivot check
        p.lu.compute(p.sys.matrix);
        return p;
    };
    const Prepared a = prepare(punctured);
    const Prepared b = prepare(solid);

    auto field_at = [&](const Prepared& p, const IncidentField& f) {
        DensitySolution s;
        s.problem = settings.problem;
        s.basis = p.sys.basis;
        s.k = settings.k;
        s.field = f;
        s.quadrature = settings.quad;
        if (p.empty) {
            s.coefficients = ComplexVector();
        } else {
            const int order = std::max(5, settings.quad.regular);
            const ComplexVector rhs = settings.problem == Problem::Soft ? rhs_soft(*p.mesh, s.basis, f, k, order)
                                                                        : rhs_hard(*p.mesh, s.basis, f, k, order);
            s.coefficients = p.lu.solve(rhs);
        }
        return scattered_field(*p.mesh, s, rep.observation_points).values;
    };

    const int axis = normal_axis(dim);
    double largest = 0.0;
    for (int i = 0; i < direction_count; ++i) {
        GapRow row;
        row.angle = 2.0 * kPi * i / direction_count;
        row.direction = Point::Zero();
        row.direction[0] = std::cos(row.angle);
        row.direction[axis] = std::sin(row.angle);
        if (std::abs(row.direction[axis]) < 1e-15) row.direction[axis] = 0.0;
        const IncidentField f = plane_wave(dim, row.direction, settings.field.amplitude);
        row.gap = max_difference(field_at(a, f), field_at(b, f));
        largest = std::max(largest, row.gap);
        rep.rows.push_back(row);
    }
    std::size_t zeros = 0;
    for (auto& r : rep.rows) {
        r.near_zero = r.gap <= near_zero_tolerance * largest;
        zeros += r.near_zero ? 1 : 0;
    }
    rep.asymptotic_claim = "the two conforming discretizations differ for almost all incident directions";
    rep.measured_trend = std::to_string(rep.rows.size() - zeros) + " of " + std::to_string(rep.rows.size()) +
                         " directions with a non-negligible gap";
    return rep;
}

void write_report_csv(std::ostream& os, const ConvergenceReport& r)
{
    os << "level,feature_size,h,panels,dofs,max_abs,difference,ratio,residual,mesh_hash\n";
    for (const auto& l : r.levels) {
        os << l.level << ',' << num(l.feature_size) << ',' << num(l.h) << ',' << l.panels << ',' << l.dofs << ','
           << num(l.max_abs) << ',' << (std::isnan(l.difference) ? "" : num(l.difference)) << ','
           << (std::isnan(l.ratio) ? "" : num(l.ratio)) << ',' << num(l.residual) << ',' << l.mesh_hash << '\n';
    }
}

void write_report_csv(std::ostream& os, const HoleReport& r)
{
    os << "level,problem,panels,dofs,delta,max_abs,residual,mesh_hash\n";
    for (const auto& row : r.rows) {
        os << row.level << ',' << to_string(r.settings.problem) << ',' << row.panels << ',' << row.dofs << ','
           << num(row.delta) << ',' << num(row.max_abs) << ',' << num(row.residual) << ',' << row.mesh_hash << '\n';
    }
}

void write_report_csv(std::ostream& os, const GapReport& r)
{
    os << "angle,d1,d" << r.hole.dimension << ",gap,near_zero\n";
    const int axis = normal_axis(r.hole.dimension);
    for (const auto& row : r.rows) {
        os << num(row.angle) << ',' << num(row.direction[0]) << ',' << num(row.direction[axis]) << ','
           << num(row.gap) << ',' << (row.near_zero ? 1 : 0) << '\n';
    }
}

void write_report_json(std::ostream& os, const ConvergenceReport& r, const std::string& config_json)
{
    Json j;
    j["experiment"] = r.experiment;
    j["family"] = r.family;
    j["settings"] = settings_json(r.settings);
    Json obs = Json::array();
    for (const auto& p : r.observation_points) obs.push_back(point_json(p, r.settings.field.dimension));
    j["observation_points"] = obs;
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        Json row;
        row["level"] = l.level;
        row["feature_size"] = l.feature_size;
        row["h"] = l.h;
        row["panels"] = l.panels;
        row["dofs"] = l.dofs;
        row["mesh_hash"] = l.mesh_hash;
        row["max_abs"] = l.max_abs;
        row["difference"] = nan_or(l.difference);
        row["ratio"] = nan_or(l.ratio);
        row["residual"] = l.residual;
        Json vals = Json::array();
        for (const auto& v : l.values) vals.push_back(complex_json(v));
        row["values"] = vals;
        if (r.settings.record_timings) row["seconds"] = l.seconds;
        levels.push_back(row);
    }
    j["levels"] = levels;
    j["differences_decreasing"] = r.differences_decreasing;
    j["max_abs_decreasing"] = r.max_abs_decreasing;
    j["final_ratio"] = nan_or(r.final_ratio);
    j["asymptotic_claim"] = r.asymptotic_claim;
    j["measured_trend"] = r.measured_trend;
    envelope(os, j, config_json);
}

void write_report_json(std::ostream& os, const HoleReport& r, const std::string& config_json)
{
    Json j;
    j["experiment"] = "hole";
    j["hole"] = hole_json(r.hole);
    j["settings"] = settings_json(r.settings);
    j["h"] = r.h;
    j["reference_panels"] = r.reference_panels;
    j["reference_mesh_hash"] = r.reference_hash;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json x;
        x["level"] = row.level;
        x["panels"] = row.panels;
        x["dofs"] = row.dofs;
        x["mesh_hash"] = row.mesh_hash;
        x["delta"] = row.delta;
        x["max_abs"] = row.max_abs;
        x["residual"] = row.residual;
        if (r.settings.record_timings) x["seconds"] = row.seconds;
        rows.push_back(x);
    }
    j["rows"] = rows;
    j["asymptotic_claim"] = r.asymptotic_claim;
    j["measured_trend"] = r.measured_trend;
    envelope(os, j, config_json);
}

void write_report_json(std::ostream& os, const GapReport& r, const std::string& config_json)
{
    Json j;
    j["experiment"] = "gap";
    j["hole"] = hole_json(r.hole);
    j["level"] = r.level;
    j["settings"] = settings_json(r.settings);
    j["h"] = r.h;
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"angle", row.angle},
                        {"direction", point_json(row.direction, r.hole.dimension)},
                        {"gap", row.gap},
                        {"near_zero", row.near_zero}});
    }
    j["rows"] = rows;
    j["asymptotic_claim"] = r.asymptotic_claim;
    j["measured_trend"] = r.measured_trend;
    envelope(os, j, config_json);
}

}  // namespace screenbem
