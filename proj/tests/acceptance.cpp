// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance [N ...] [--expect-fail N ...]
// Plain numbers select criteria (default: all). The exit status is 0 when the
// failing criteria are exactly the --expect-fail set.

#include "oracles.hpp"
#include "screenbem/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace screenbem;

namespace {

struct Outcome {
    bool pass = false;
    std::string title;
    std::string detail;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double max_relative(const ComplexMatrix& a, const ComplexMatrix& b)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::abs(b(i, j)));
    return worst;
}

ComplexVector random_density(Eigen::Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexVector v(n);
    for (auto& c : v) c = Complex(u(rng), u(rng));
    return v;
}

ExperimentSettings settings(Problem problem, double k, const Point& direction, int dim)
{
    ExperimentSettings s;
    s.problem = problem;
    s.k = k;
    s.field = plane_wave(dim, direction);
    return s;
}

bool strictly_decreasing(const std::vector<double>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

std::string list(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
    return s + "]";
}

// Systems seen by the assembly observer during the run.
struct SymmetryLog {
    std::size_t systems = 0;
    double worst = 0.0;
};
SymmetryLog symmetry_log;

// ---------------------------------------------------------------------------

Outcome jump_relations()
{
    Outcome o{false, "jump relations", ""};
    const auto m = mesh(unit_screen(2), 1.0 / 16.0);
    const auto pc = make_basis(m, BasisKind::PiecewiseConstant);
    const auto s = jump_check_single_layer(m, pc, random_density(16, 2024), Wavenumber(5.0));

    const auto two = mesh(unit_screen(2), 0.5);
    const auto d2 = jump_check_double_layer(two, make_basis(two, BasisKind::PiecewiseLinearZeroBoundary),
                                            ComplexVector::Ones(1), Wavenumber(5.0));
    const auto hats = make_basis(m, BasisKind::PiecewiseLinearZeroBoundary);
    const auto d16 = jump_check_double_layer(m, hats, random_density(15, 2025), Wavenumber(5.0));
    const double d = std::max(d2.max_relative_error, d16.max_relative_error);
    o.pass = s.max_relative_error <= 0.01 && s.max_relative_jump <= 1e-6 && d <= 0.01;
    o.detail = "dn S err " + fmt(s.max_relative_error) + " (<=0.01), [S] " + fmt(s.max_relative_jump) +
               " (<=1e-6), D trace err " + fmt(d) + " (<=0.01)";
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o{false, "oracle equivalence", ""};
    double worst = 0.0;
    for (int panels : {2, 4}) {
        const auto m = mesh(unit_screen(2), 1.0 / panels);
        for (double k : {1.0, 5.0}) {
            worst = std::max(worst, max_relative(assemble_single_layer(m, Wavenumber(k), {}).matrix,
                                                 oracle::single_layer(m, k)));
            const auto t = assemble_hypersingular(m, Wavenumber(k), {});
            worst = std::max(worst, max_relative(t.matrix, oracle::hypersingular(m, t.basis, k)));
        }
    }
    ScreenPanelMesh fan;
    fan.dimension = 3;
    fan.vertices = {Point(0, 0, 0), Point(1, 0, 0), Point(1, 1, 0), Point(0, 1, 0), Point(0.5, 0.5, 0)};
    fan.panels = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    flag_boundary(fan);
    const oracle::PairTable table = oracle::pair_table(fan, 2.0);
    worst = std::max(worst, max_relative(assemble_single_layer(fan, Wavenumber(2.0), {}).matrix,
                                         oracle::single_layer(table)));
    const auto t3 = assemble_hypersingular(fan, Wavenumber(2.0), {});
    worst = std::max(worst, max_relative(t3.matrix, oracle::hypersingular(fan, t3.basis, 2.0, table)));

    double fd = 0.0;
    const std::vector<double> eps{2e-4, 1e-4};
    for (int panels : {2, 4}) {
        const auto m = mesh(unit_screen(2), 1.0 / panels);
        const auto t = assemble_hypersingular(m, Wavenumber(1.0), {});
        for (int j = 0; j < std::min<int>(2, static_cast<int>(t.basis.dimension())); ++j) {
            const auto v = oracle::hypersingular_fd_2d(m, t.basis, 0, static_cast<std::size_t>(j), 1.0, eps, 1e-11);
            const Complex limit = richardson_first_order(eps[0], v[0], eps[1], v[1]);
            fd = std::max(fd, std::abs(limit - t.matrix(0, j)) / std::abs(t.matrix(0, j)));
        }
    }
    o.pass = worst <= 1e-6 && fd <= 1e-4;
    o.detail = "max entry rel err " + fmt(worst) + " (<=1e-6), FD hypersingular " + fmt(fd) + " (<=1e-4)";
    return o;
}

Outcome complex_symmetry()
{
    Outcome o{false, "complex symmetry", ""};
    o.pass = symmetry_log.systems > 0 && symmetry_log.worst <= 1e-10;
    o.detail = std::to_string(symmetry_log.systems) + " systems, max ||A-A^T||/||A|| " + fmt(symmetry_log.worst) +
               " (<=1e-10)";
    return o;
}

// Total field and its one-sided normal derivative extrapolated onto the
// screen at panel midpoints, both sides. Hard residuals are reported
// separately for the edge panels, the next two panels and the rest.
Outcome boundary_recovery()
{
    Outcome o{false, "boundary-condition recovery", ""};
    const double k = 5.0;
    const auto m = mesh(unit_screen(2), 1.0 / 64.0);
    const auto field = plane_wave(2, Point(0.0, -1.0, 0.0));
    const std::vector<double> eps{kJumpEpsilons[1], kJumpEpsilons[2]};

    const auto soft = solve_soft(m, Wavenumber(k), field);
    const auto hard = solve_hard(m, Wavenumber(k), field);
    double soft_worst = 0.0, hard_edge = 0.0, hard_near = 0.0, hard_rest = 0.0;
    for (std::size_t p = 0; p < m.panel_count(); ++p) {
        const Point c = m.panel_centroid(p);
        const std::size_t from_edge = std::min(p, m.panel_count() - 1 - p);
        for (double side : {1.0, -1.0}) {
            std::vector<Point> pts;
            for (double e : eps) {
                const double delta = 0.1 * e;
                pts.push_back(c + Point(0.0, side * e, 0.0));
                pts.push_back(c + Point(0.0, side * (e + delta), 0.0));
                pts.push_back(c + Point(0.0, side * (e - delta), 0.0));
            }
            const auto us = total_field(m, soft, pts).values;
            const auto uh = total_field(m, hard, pts).values;
            std::vector<Complex> value, slope;
            for (std::size_t i = 0; i < eps.size(); ++i) {
                value.push_back(us[3 * i]);
                slope.push_back((uh[3 * i + 1] - uh[3 * i + 2]) / (0.2 * eps[i]));
            }
            soft_worst = std::max(soft_worst, std::abs(richardson_first_order(eps[0], value[0], eps[1], value[1])));
            double& target = from_edge == 0 ? hard_edge : from_edge < 3 ? hard_near : hard_rest;
            target = std::max(target, std::abs(richardson_first_order(eps[0], slope[0], eps[1], slope[1])));
        }
    }
    // max |u^i| = 1 for a unit plane wave
    const double hard_worst = std::max({hard_edge, hard_near, hard_rest}) / k;
    o.pass = soft_worst <= 0.05 && hard_worst <= 0.05;
    o.detail = "k=5 h=1/64, soft max|u| " + fmt(soft_worst) + " (<=0.05); hard max|du/dn|/k " + fmt(hard_worst) +
               " (<=0.05): edge panels " + fmt(hard_edge / k) + ", next two " + fmt(hard_near / k) + ", rest " +
               fmt(hard_rest / k);
    return o;
}

Outcome null_field_decay()
{
    Outcome o{true, "null-field decay", ""};
    struct Case {
        std::string name;
        PrefractalFamily family;
        Problem problem;
        double h_factor;
    };
    const std::vector<Case> cases{
        {"hard sierpinski", PrefractalFamily{SierpinskiFamily{}}, Problem::Hard, 0.25},
        {"hard dust 1/3", PrefractalFamily{CantorDustFamily{1.0 / 3.0}}, Problem::Hard, 0.5},
        {"soft dust alpha=0.2", PrefractalFamily{CantorDustFamily{0.6}}, Problem::Soft, 0.5},
    };
    for (const auto& c : cases) {
        auto s = settings(c.problem, 2.0, Point(0.0, 0.0, -1.0), 3);
        s.h_factor = c.h_factor;
        const auto r = null_test(c.family, 1, 4, s);
        std::vector<double> v;
        bool dofs = true;
        for (const auto& l : r.levels) {
            v.push_back(l.max_abs);
            dofs = dofs && l.dofs > 0;
        }
        const bool ok = dofs && strictly_decreasing(v) && v.back() <= 0.5 * v.front();
        o.pass = o.pass && ok;
        o.detail += (o.detail.empty() ? "" : "; ") + c.name + " " + list(v) + " ratio " + fmt(v.back() / v.front());
    }
    o.detail += " (strictly decreasing, ratio <=0.5)";
    return o;
}

std::string cantor_csv()
{
    const auto r = converge_prefractal(PrefractalFamily{CantorFamily{}}, 2, 6,
                                       settings(Problem::Soft, 5.0, Point(0.0, -1.0, 0.0), 2));
    std::ostringstream os;
    write_report_csv(os, r);
    return os.str();
}

Outcome cauchy_convergence()
{
    Outcome o{true, "prefractal Cauchy convergence", ""};
    const auto check = [&](const std::string& name, const ConvergenceReport& r) {
        std::vector<double> d, ratios;
        for (const auto& l : r.levels)
            if (!std::isnan(l.difference)) d.push_back(l.difference);
        for (const auto& l : r.levels)
            if (!std::isnan(l.ratio)) ratios.push_back(l.ratio);
        bool ok = d.size() >= 2 && strictly_decreasing(d);
        for (double q : ratios) ok = ok && q < 1.0;
        o.pass = o.pass && ok;
        o.detail += (o.detail.empty() ? "" : "; ") + name + " differences " + list(d);
    };
    check("soft cantor n=2 j=2..6",
          converge_prefractal(PrefractalFamily{CantorFamily{}}, 2, 6,
                              settings(Problem::Soft, 5.0, Point(0.0, -1.0, 0.0), 2)));
    check("soft koch n=3 j=1..3", converge_prefractal(PrefractalFamily{KochFamily{}}, 1, 3,
                                                      settings(Problem::Soft, 5.0, Point(0.0, 0.0, -1.0), 3)));
    o.detail += " (strictly decreasing, ratios <1)";
    return o;
}

Outcome hole_effect_criterion()
{
    Outcome o{false, "hole effect", ""};
    HoleSpec hole;
    std::map<Problem, std::vector<double>> delta;
    for (Problem p : {Problem::Soft, Problem::Hard}) {
        auto s = settings(p, 10.0, Point(0.0, -1.0, 0.0), 2);
        s.h_factor = 0.25;
        for (const auto& row : hole_effect(hole, 1, 5, s).rows) delta[p].push_back(row.delta);
    }
    const auto& soft = delta[Problem::Soft];
    const auto& hard = delta[Problem::Hard];
    const bool soft_ok = strictly_decreasing(soft) && soft[4] <= 0.3 * soft[0];
    const double plateau = std::min({hard[2], hard[3], hard[4]});
    const bool hard_ok = plateau >= 0.5 * hard[2];
    o.pass = soft_ok && hard_ok;
    o.detail = "soft delta " + list(soft) + " d5/d1 " + fmt(soft[4] / soft[0]) + " (decreasing, <=0.3); hard delta " +
               list(hard) + " min(d3..d5)/d3 " + fmt(plateau / hard[2]) + " (>=0.5)";
    return o;
}

Outcome radiation()
{
    Outcome o{true, "radiation and far-field consistency", ""};
    struct Case {
        std::string name;
        ScreenPanelMesh mesh;
        Problem problem;
        double k;
        Point direction;
    };
    HoleSpec hole;
    const double h_hole = 0.25 * std::pow(1.0 / 3.0, 5);
    std::vector<Case> cases{
        {"unit soft k=5", mesh(unit_screen(2), 1.0 / 64.0), Problem::Soft, 5.0, Point(0.0, -1.0, 0.0)},
        {"unit hard k=5", mesh(unit_screen(2), 1.0 / 64.0), Problem::Hard, 5.0, Point(0.0, -1.0, 0.0)},
        {"cantor j=6 soft k=5", mesh(PrefractalFamily{CantorFamily{}}.generate(6), 0.5 * std::pow(1.0 / 3.0, 6)), Problem::Soft,
         5.0, Point(0.0, -1.0, 0.0)},
        {"punctured j=5 soft k=10", mesh(punctured_screen(hole, 5), h_hole), Problem::Soft, 10.0,
         Point(0.0, -1.0, 0.0)},
        {"punctured j=5 hard k=10", mesh(punctured_screen(hole, 5), h_hole), Problem::Hard, 10.0,
         Point(0.0, -1.0, 0.0)},
        {"sierpinski j=2 hard k=2", mesh(PrefractalFamily{SierpinskiFamily{}}.generate(2), 0.25 * 0.25), Problem::Hard, 2.0,
         Point(0.0, 0.0, -1.0)},
        {"unit square soft k=2", mesh(unit_screen(3), 0.2), Problem::Soft, 2.0, Point(0.0, 0.0, -1.0)},
    };
    double decay = 0.0, far = 0.0;
    for (const auto& c : cases) {
        const auto sol = solve(c.problem, c.mesh, Wavenumber(c.k), plane_wave(c.mesh.dimension, c.direction));
        const auto rep = radiation_check(c.mesh, sol, unit_directions(c.mesh.dimension, 16));
        const bool ok = rep.max_decay_variation <= 0.05 && rep.max_far_field_error <= 0.01;
        o.pass = o.pass && ok;
        decay = std::max(decay, rep.max_decay_variation);
        far = std::max(far, rep.max_far_field_error);
        o.detail += (o.detail.empty() ? "" : "; ") + c.name + " " + fmt(rep.max_decay_variation) + "/" +
                    fmt(rep.max_far_field_error) + (ok ? "" : " FAIL");
    }
    o.detail = "decay variation/far-field error per problem: " + o.detail + " (<=0.05/<=0.01)";
    return o;
}

Outcome special_functions()
{
    Outcome o{false, "special functions", ""};
    double wronskian = 0.0;
    for (double x : {0.5, 2.0, 10.0, 50.0}) {
        const Complex h0 = hankel1(0, x), h1 = hankel1(1, x);
        const double w = h1.real() * h0.imag() - h0.real() * h1.imag();
        wronskian = std::max(wronskian, std::abs(w - 2.0 / (kPi * x)) / (2.0 / (kPi * x)));
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double grad = 0.0;
    int pairs = 0;
    while (pairs < 100) {
        const int dim = pairs % 2 == 0 ? 2 : 3;
        const Point x(u(rng), u(rng), dim == 3 ? u(rng) : 0.0);
        const Point y(u(rng), u(rng), dim == 3 ? u(rng) : 0.0);
        if ((x - y).norm() < 0.1) continue;
        const Wavenumber k(1.0 + 4.0 * (u(rng) + 1.0));
        const auto g = grad_phi_y(x, y, k, dim);
        const double h = 1e-5;
        double num = 0.0, den = 0.0;
        for (int c = 0; c < dim; ++c) {
            Point yp = y, ym = y;
            yp[c] += h;
            ym[c] -= h;
            const Complex fd = (phi(x, yp, k, dim) - phi(x, ym, k, dim)) / (2.0 * h);
            num = std::max(num, std::abs(fd - g[c]));
            den = std::max(den, std::abs(g[c]));
        }
        grad = std::max(grad, num / den);
        ++pairs;
    }
    o.pass = wronskian <= 1e-10 && grad <= 1e-6;
    o.detail = "Wronskian rel err " + fmt(wronskian) + " (<=1e-10), FD gradient rel err " + fmt(grad) +
               " over 100 pairs (<=1e-6)";
    return o;
}

Outcome determinism()
{
    Outcome o{false, "determinism", ""};
    const std::string a = cantor_csv(), b = cantor_csv();
    o.pass = !a.empty() && a == b;
    o.detail = "two soft Cantor j=2..6 runs, " + std::to_string(a.size()) + " CSV bytes, " +
               (a == b ? "identical" : "different");
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> only, expected;
    bool expect = false;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--expect-fail") {
            expect = true;
            continue;
        }
        (expect ? expected : only).insert(std::atoi(a.c_str()));
    }
    const auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };

    set_assembly_observer([](const GalerkinSystem& sys) {
        const double norm = sys.matrix.cwiseAbs().maxCoeff();
        if (norm == 0.0) return;
        ++symmetry_log.systems;
        symmetry_log.worst =
            std::max(symmetry_log.worst, (sys.matrix - sys.matrix.transpose()).cwiseAbs().maxCoeff() / norm);
    });

    const std::vector<std::pair<int, std::function<Outcome()>>> order{
        {1, jump_relations},   {2, oracle_equivalence},    {4, boundary_recovery}, {5, null_field_decay},
        {6, cauchy_convergence}, {7, hole_effect_criterion}, {8, radiation},         {9, special_functions},
        {10, determinism},     {3, complex_symmetry},
    };
    std::map<int, Outcome> results;
    std::map<int, double> seconds;
    for (const auto& [id, run] : order) {
        if (!wanted(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            results[id] = run();
        } catch (const std::exception& e) {
            results[id] = Outcome{false, "criterion " + std::to_string(id), std::string("exception: ") + e.what()};
        }
        seconds[id] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "criterion " << id << " done in " << fmt(seconds[id]) << " s\n";
    }
    std::set<int> failed;
    for (const auto& [id, r] : results) {
        if (!r.pass) failed.insert(id);
        std::cout << "criterion " << id << ' ' << (r.pass ? "PASS" : "FAIL") << ' ' << r.title << ": " << r.detail
                  << '\n';
    }
    std::set<int> expected_here;
    for (int id : expected)
        if (wanted(id)) expected_here.insert(id);
    std::cout << results.size() - failed.size() << " of " << results.size() << " criteria pass";
    if (!expected_here.empty()) {
        std::cout << "; expected failures:";
        for (int id : expected_here) std::cout << ' ' << id;
    }
    std::cout << '\n';
    return failed == expected_here ? 0 : 1;
}
