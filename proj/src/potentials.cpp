#include "screenbem/potentials.hpp"

#include "screenbem/parallel.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>

namespace screenbem {

std::string to_string(FieldContent c)
{
    switch (c) {
    case FieldContent::Scattered: return "scattered";
    case FieldContent::Total: return "total";
    case FieldContent::Incident: return "incident";
    case FieldContent::SingleLayer: return "single_layer";
    case FieldContent::DoubleLayer: return "double_layer";
    }
    return "unknown";
}

std::vector<Point> grid_points(const Point& origin, int axis_a, double length_a, int na, int axis_b,
                               double length_b, int nb)
{
    require(axis_a >= 0 && axis_a < 3 && axis_b >= 0 && axis_b < 3 && axis_a != axis_b, "grid axes invalid");
    require(na >= 1 && nb >= 1, "grid needs at least one sample per axis");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(na) * static_cast<std::size_t>(nb));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            Point p = origin;
            p[axis_a] += na == 1 ? 0.0 : length_a * i / (na - 1);
            p[axis_b] += nb == 1 ? 0.0 : length_b * j / (nb - 1);
            out.push_back(p);
        }
    return out;
}

namespace {

using Kernel = std::function<Complex(const Point& x, const Point& y)>;

FieldGrid evaluate(const ScreenPanelMesh& mesh, const BasisSpec& basis, const ComplexVector& density,
                   const std::vector<Point>& points, const QuadratureSpec& quad, const Kernel& kernel,
                   FieldContent content)
{
    validate(quad);
    require(static_cast<std::size_t>(density.size()) == basis.dimension(), "density length does not match basis");
    require(basis.panel_count == mesh.panel_count(), "basis does not match mesh");
    FieldGrid f;
    f.dimension = mesh.dimension;
    f.content = content;
    f.points = points;
    f.values.assign(points.size(), 0.0);
    f.near_screen.assign(points.size(), false);
    const double h = mesh.mesh_size();
    std::vector<char> near(points.size(), 0);
    parallel_for(points.size(), [&](std::size_t i) {
        const Point& x = points[i];
        std::vector<PointNode> nodes;
        Complex sum = 0.0;
        double closest = INFINITY;
        for (std::size_t p = 0; p < mesh.panel_count(); ++p) {
            const double d = point_panel_distance(mesh, p, x);
            closest = std::min(closest, d);
            if (d <= 0.0) throw InvalidInput("evaluation point lies on the screen");
            point_nodes(mesh, p, x, quad, nodes);
            for (const auto& n : nodes) {
                const Complex v = basis.evaluate(mesh, density, p, n.sy);
                if (v != 0.0) sum += kernel(x, n.y) * v * n.w;
            }
        }
        near[i] = closest < 0.1 * h;
        f.values[i] = sum;
    });
    for (std::size_t i = 0; i < points.size(); ++i) f.near_screen[i] = near[i] != 0;
    for (const auto& v : f.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NumericalFailure("non-finite potential value");
        }
    }
    return f;
}

double screen_diameter(const ScreenPanelMesh& mesh)
{
    Point lo = mesh.vertices.front(), hi = mesh.vertices.front();
    for (const auto& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

void write_number(std::ostream& os, double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

FieldGrid eval_single_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis, const ComplexVector& density,
                            const std::vector<Point>& points, Wavenumber k, const QuadratureSpec& quad)
{
    const int dim = mesh.dimension;
    const double kv = k.value();
    return evaluate(mesh, basis, density, points, quad,
                    [dim, kv](const Point& x, const Point& y) { return phi_radial((x - y).norm(), kv, dim); },
                    FieldContent::SingleLayer);
}

FieldGrid eval_double_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis, const ComplexVector& density,
                            const std::vector<Point>& points, Wavenumber k, const QuadratureSpec& quad)
{
    const int dim = mesh.dimension;
    const int axis = normal_axis(dim);
    const double kv = k.value();
    return evaluate(mesh, basis, density, points, quad,
                    [dim, axis, kv](const Point& x, const Point& y) {
                        const double r = (x - y).norm();
                        // dPhi/dn(y) = grad_y Phi . e_n = -Phi'(r) (x - y)_n / r
                        return -phi_radial_derivative(r, kv, dim) * ((x[axis] - y[axis]) / r);
                    },
                    FieldContent::DoubleLayer);
}

FieldGrid eval_single_layer_normal_derivative(const ScreenPanelMesh& mesh, const BasisSpec& basis,
                                              const ComplexVector& density, const std::vector<Point>& points,
                                              Wavenumber k, const QuadratureSpec& quad)
{
    const int dim = mesh.dimension;
    const int axis = normal_axis(dim);
    const double kv = k.value();
    return evaluate(mesh, basis, density, points, quad,
                    [dim, axis, kv](const Point& x, const Point& y) {
                        const double r = (x - y).norm();
                        return phi_radial_derivative(r, kv, dim) * ((x[axis] - y[axis]) / r);
                    },
                    FieldContent::SingleLayer);
}

FieldGrid scattered_field(const ScreenPanelMesh& mesh, const DensitySolution& solution,
                          const std::vector<Point>& points)
{
    const Wavenumber k(solution.k);
    FieldGrid f;
    if (solution.basis.dimension() == 0) {
        f.dimension = mesh.dimension;
        f.points = points;
        f.values.assign(points.size(), 0.0);
        f.near_screen.assign(points.size(), false);
        for (const auto& x : points) {
            for (std::size_t p = 0; p < mesh.panel_count(); ++p) {
                if (point_panel_distance(mesh, p, x) <= 0.0) throw InvalidInput("evaluation point lies on the screen");
            }
        }
    } else if (solution.problem == Problem::Soft) {
        f = eval_single_layer(mesh, solution.basis, solution.coefficients, points, k, solution.quadrature);
        for (auto& v : f.values) v = -v;
    } else {
        f = eval_double_layer(mesh, solution.basis, solution.coefficients, points, k, solution.quadrature);
    }
    f.content = FieldContent::Scattered;
    return f;
}

FieldGrid incident_field(const IncidentField& field, const std::vector<Point>& points, Wavenumber k)
{
    FieldGrid f;
    f.dimension = field.dimension;
    f.content = FieldContent::Incident;
    f.points = points;
    f.near_screen.assign(points.size(), false);
    for (const auto& x : points) f.values.push_back(incident_value(field, x, k));
    return f;
}

FieldGrid total_field(const ScreenPanelMesh& mesh, const DensitySolution& solution, const std::vector<Point>& points)
{
    FieldGrid f = scattered_field(mesh, solution, points);
    const FieldGrid inc = incident_field(solution.field, points, Wavenumber(solution.k));
    for (std::size_t i = 0; i < points.size(); ++i) f.values[i] += inc.values[i];
    f.content = FieldContent::Total;
    return f;
}

Complex far_field_prefactor(double r, double k, int dimension)
{
    if (dimension == 3) return std::exp(kI * (k * r)) / (4.0 * kPi * r);
    return 0.25 * kI * std::sqrt(2.0 / (kPi * k * r)) * std::exp(kI * (k * r - 0.25 * kPi));
}

FarFieldPattern far_field(const ScreenPanelMesh& mesh, const DensitySolution& solution,
                          const std::vector<Point>& directions)
{
    require(!directions.empty(), "far field needs at least one direction");
    for (const auto& d : directions) require(std::abs(d.norm() - 1.0) < 1e-12, "far-field directions must be unit vectors");
    FarFieldPattern f;
    f.dimension = mesh.dimension;
    f.directions = directions;
    f.values.assign(directions.size(), 0.0);
    f.convention = mesh.dimension == 3
                       ? "u^s(r xhat) ~ exp(ikr)/(4 pi r) * F(xhat)"
                       : "u^s(r xhat) ~ (i/4) sqrt(2/(pi k r)) exp(i(kr - pi/4)) * F(xhat)";
    if (solution.basis.dimension() == 0) return f;
    const double k = solution.k;
    const int axis = normal_axis(mesh.dimension);
    const int order = std::max(5, solution.quadrature.regular);
    parallel_for(directions.size(), [&](std::size_t i) {
        const Point& d = directions[i];
        std::vector<PointNode> nodes;
        Complex sum = 0.0;
        for (std::size_t p = 0; p < mesh.panel_count(); ++p) {
            panel_nodes(mesh, p, order, nodes);
            for (const auto& n : nodes) {
                const Complex v = solution.basis.evaluate(mesh, solution.coefficients, p, n.sy);
                sum += std::exp(-kI * (k * d.dot(n.y))) * v * n.w;
            }
        }
        // soft: u^s = -S phi; hard: u^s = D psi with kernel -ik (xhat . e_n)
        f.values[i] = solution.problem == Problem::Soft ? -sum : -kI * k * d[axis] * sum;
    });
    return f;
}

std::vector<Point> unit_directions(int dimension, int count)
{
    require(count >= 1, "direction count must be positive");
    std::vector<Point> out;
    if (dimension == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * kPi * i / count;
            out.emplace_back(std::cos(t), std::sin(t), 0.0);
        }
        return out;
    }
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double rho = std::sqrt(1.0 - z * z);
        out.emplace_back(rho * std::cos(golden * i), rho * std::sin(golden * i), z);
    }
    return out;
}

RadiationReport radiation_check(const ScreenPanelMesh& mesh, const DensitySolution& solution,
                                const std::vector<Point>& directions, int radii)
{
    require(radii >= 2, "radiation check needs at least two radii");
    RadiationReport rep;
    Point lo = mesh.vertices.front(), hi = lo;
    for (const auto& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    rep.centre = 0.5 * (lo + hi);
    const double k = solution.k;
    const int n = mesh.dimension;
    const FarFieldPattern ff = far_field(mesh, solution, directions);
    double fmax = 0.0;
    for (const auto& v : ff.values) fmax = std::max(fmax, std::abs(v));
    if (fmax == 0.0) return rep;

    std::vector<Point> pts;
    std::vector<double> rs;
    for (int i = 0; i < radii; ++i) rs.push_back((50.0 + 50.0 * i / (radii - 1)) / k);
    const double r_far = 200.0 / k;
    for (const auto& d : directions) {
        for (double r : rs) pts.push_back(rep.centre + r * d);
        pts.push_back(rep.centre + r_far * d);
    }
    const auto u = scattered_field(mesh, solution, pts).values;
    const std::size_t stride = rs.size() + 1;
    for (std::size_t d = 0; d < directions.size(); ++d) {
        double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            const double s = std::abs(u[d * stride + i]) * std::pow(rs[i], 0.5 * (n - 1));
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
        if (smax > 0.0) rep.max_decay_variation = std::max(rep.max_decay_variation, (smax - smin) / smax);
        const Complex shift = std::exp(kI * (k * directions[d].dot(rep.centre)));
        const Complex predicted = far_field_prefactor(r_far, k, n) * shift * ff.values[d];
        const double err = std::abs(u[d * stride + rs.size()] - predicted);
        const double scale = std::abs(far_field_prefactor(r_far, k, n));
        rep.max_far_field_error = std::max(rep.max_far_field_error, err / (scale * fmax));
        if (ff.values[d] != 0.0)
            rep.max_pointwise_error = std::max(rep.max_pointwise_error, err / std::abs(predicted));
    }
    return rep;
}

Complex richardson_first_order(double eps_coarse, Complex coarse, double eps_fine, Complex fine)
{
    return fine + (fine - coarse) * (eps_fine / (eps_coarse - eps_fine));
}

namespace {

using Evaluator = std::function<FieldGrid(const std::vector<Point>&)>;

JumpReport jump_report(const ScreenPanelMesh& mesh, const BasisSpec& basis, const ComplexVector& density,
                       const std::vector<double>& epsilons, const Evaluator& eval, double plus_sign,
                       const std::string& identity, bool zero_jump)
{
    require(epsilons.size() >= 2, "jump check needs at least two offsets");
    JumpReport rep;
    rep.identity = identity;
    rep.epsilons = epsilons;
    const int axis = normal_axis(mesh.dimension);
    const double diam = screen_diameter(mesh);

    std::vector<std::size_t> panels;
    std::vector<Point> mids;
    for (std::size_t p = 0; p < mesh.panel_count(); ++p) {
        bool inner = true;
        for (std::size_t a = 0; a < mesh.vertices_per_panel(); ++a) inner = inner && !mesh.boundary[mesh.panels[p][a]];
        if (!inner) continue;
        panels.push_back(p);
        mids.push_back(mesh.panel_centroid(p));
    }
    std::vector<Point> pts;
    for (double e : epsilons)
        for (double side : {1.0, -1.0})
            for (const auto& m : mids) {
                Point x = m;
                x[axis] += side * e * diam;
                pts.push_back(x);
            }
    const FieldGrid g = eval(pts);
    const std::size_t nm = mids.size();
    auto value = [&](std::size_t ie, int side, std::size_t im) { return g.values[(2 * ie + side) * nm + im]; };
    const std::size_t ne = epsilons.size();
    for (std::size_t im = 0; im < nm; ++im) {
        JumpSample s;
        s.midpoint = mids[im];
        const std::array<double, 3> centre{1.0 / mesh.vertices_per_panel(), 1.0 / mesh.vertices_per_panel(),
                                           mesh.dimension == 3 ? 1.0 / 3.0 : 0.0};
        s.density = basis.evaluate(mesh, density, panels[im], centre);
        s.plus = richardson_first_order(epsilons[ne - 2], value(ne - 2, 0, im), epsilons[ne - 1], value(ne - 1, 0, im));
        s.minus =
            richardson_first_order(epsilons[ne - 2], value(ne - 2, 1, im), epsilons[ne - 1], value(ne - 1, 1, im));
        s.expected_plus = plus_sign * 0.5 * s.density;
        s.expected_minus = -plus_sign * 0.5 * s.density;
        const double scale = std::abs(s.density);
        if (scale > 0.0) {
            rep.max_relative_error = std::max(
                {rep.max_relative_error, std::abs(s.plus - s.expected_plus) / std::abs(s.expected_plus),
                 std::abs(s.minus - s.expected_minus) / std::abs(s.expected_minus)});
            if (zero_jump) {
                const Complex jp = value(ne - 1, 0, im), jm = value(ne - 1, 1, im);
                rep.max_relative_jump = std::max(rep.max_relative_jump, std::abs(jp - jm) / std::abs(jp));
            }
        }
        rep.samples.push_back(s);
    }
    return rep;
}

}  // namespace

JumpReport jump_check_single_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis,
                                   const ComplexVector& density, Wavenumber k, const QuadratureSpec& quad,
                                   const std::vector<double>& epsilons)
{
    // Normal derivative limits, and the trace jump of S phi itself.
    JumpReport rep = jump_report(
        mesh, basis, density, epsilons,
        [&](const std::vector<Point>& pts) {
            return eval_single_layer_normal_derivative(mesh, basis, density, pts, k, quad);
        },
        -1.0, "d_n(S phi) = -+ phi/2, [S phi] = 0", false);
    const JumpReport traces = jump_report(
        mesh, basis, density, epsilons,
        [&](const std::vector<Point>& pts) { return eval_single_layer(mesh, basis, density, pts, k, quad); }, 1.0,
        "", true);
    rep.max_relative_jump = traces.max_relative_jump;
    return rep;
}

JumpReport jump_check_double_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis,
                                   const ComplexVector& density, Wavenumber k, const QuadratureSpec& quad,
                                   const std::vector<double>& epsilons)
{
    return jump_report(
        mesh, basis, density, epsilons,
        [&](const std::vector<Point>& pts) { return eval_double_layer(mesh, basis, density, pts, k, quad); }, 1.0,
        "D psi = +- psi/2", false);
}

void write_field_csv(std::ostream& os, const FieldGrid& f)
{
    os << (f.dimension == 2 ? "x1,x2" : "x1,x2,x3") << ",re,im,abs,near_screen\n";
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        for (int c = 0; c < f.dimension; ++c) {
            write_number(os, f.points[i][c]);
            os << ',';
        }
        write_number(os, f.values[i].real());
        os << ',';
        write_number(os, f.values[i].imag());
        os << ',';
        write_number(os, std::abs(f.values[i]));
        os << ',' << (f.near_screen[i] ? 1 : 0) << '\n';
    }
}

void write_field_json(std::ostream& os, const FieldGrid& f)
{
    nlohmann::ordered_json j;
    j["dimension"] = f.dimension;
    j["content"] = to_string(f.content);
    auto pts = nlohmann::ordered_json::array();
    auto vals = nlohmann::ordered_json::array();
    auto near = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        auto p = nlohmann::ordered_json::array();
        for (int c = 0; c < f.dimension; ++c) p.push_back(f.points[i][c]);
        pts.push_back(p);
        vals.push_back({f.values[i].real(), f.values[i].imag()});
        near.push_back(static_cast<bool>(f.near_screen[i]));
    }
    j["points"] = pts;
    j["values"] = vals;
    j["near_screen"] = near;
    os << j.dump(2) << '\n';
}

void write_far_field_csv(std::ostream& os, const FarFieldPattern& f)
{
    os << (f.dimension == 2 ? "d1,d2" : "d1,d2,d3") << ",re,im,abs\n";
    for (std::size_t i = 0; i < f.directions.size(); ++i) {
        for (int c = 0; c < f.dimension; ++c) {
            write_number(os, f.directions[i][c]);
            os << ',';
        }
        write_number(os, f.values[i].real());
        os << ',';
        write_number(os, f.values[i].imag());
        os << ',';
        write_number(os, std::abs(f.values[i]));
        os << '\n';
    }
}

void write_far_field_json(std::ostream& os, const FarFieldPattern& f)
{
    nlohmann::ordered_json j;
    j["dimension"] = f.dimension;
    j["convention"] = f.convention;
    auto dirs = nlohmann::ordered_json::array();
    auto vals = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < f.directions.size(); ++i) {
        auto d = nlohmann::ordered_json::array();
        for (int c = 0; c < f.dimension; ++c) d.push_back(f.directions[i][c]);
        dirs.push_back(d);
        vals.push_back({f.values[i].real(), f.values[i].imag()});
    }
    j["directions"] = dirs;
    j["values"] = vals;
    os << j.dump(2) << '\n';
}

}  // namespace screenbem
