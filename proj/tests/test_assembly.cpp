#include "doctest.h"

#include "oracles.hpp"
#include "screenbem/assembly.hpp"
#include "screenbem/potentials.hpp"

#include <sstream>

using namespace screenbem;

namespace {

ScreenPanelMesh interval_mesh(int panels)
{
    return mesh(unit_screen(2), 1.0 / panels);
}

// Unit square split into four triangles around its centre.
ScreenPanelMesh square_fan()
{
    ScreenPanelMesh m;
    m.dimension = 3;
    m.vertices = {Point(0, 0, 0), Point(1, 0, 0), Point(1, 1, 0), Point(0, 1, 0), Point(0.5, 0.5, 0)};
    m.panels = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    flag_boundary(m);
    return m;
}

double max_relative(const ComplexMatrix& a, const ComplexMatrix& b)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::abs(b(i, j)));
    return worst;
}

double asymmetry(const ComplexMatrix& a)
{
    return (a - a.transpose()).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("2D single layer on a 2-panel interval matches the log-split oracle")
{
    const auto m = interval_mesh(2);
    for (double k : {1.0, 5.0}) {
        const auto sys = assemble_single_layer(m, Wavenumber(k), QuadratureSpec{});
        const ComplexMatrix ref = oracle::single_layer(m, k);
        CHECK(max_relative(sys.matrix, ref) < 1e-8);
        CHECK(asymmetry(sys.matrix) <= 1e-10);
    }
}

TEST_CASE("2D hypersingular matches the oracle on 2 and 4 panels")
{
    for (int panels : {2, 4}) {
        const auto m = interval_mesh(panels);
        const double k = 3.0;
        const auto sys = assemble_hypersingular(m, Wavenumber(k), QuadratureSpec{});
        REQUIRE(sys.matrix.rows() == panels - 1);
        const ComplexMatrix ref = oracle::hypersingular(m, sys.basis, k);
        CHECK(max_relative(sys.matrix, ref) < 1e-8);
        CHECK(asymmetry(sys.matrix) <= 1e-10);
    }
}

TEST_CASE("2D hypersingular entry matches the off-surface finite-difference construction")
{
    const auto m = interval_mesh(2);
    const double k = 1.0;
    const auto sys = assemble_hypersingular(m, Wavenumber(k), QuadratureSpec{});
    const std::vector<double> eps{2e-4, 1e-4};
    const auto vals = oracle::hypersingular_fd_2d(m, sys.basis, 0, 0, k, eps, 1e-11);
    const Complex limit = richardson_first_order(eps[0], vals[0], eps[1], vals[1]);
    CHECK(std::abs(limit - sys.matrix(0, 0)) <= 1e-4 * std::abs(sys.matrix(0, 0)));
}

TEST_CASE("3D matrices on a four-triangle square match the Duffy oracle")
{
    const auto m = square_fan();
    const double k = 2.0;
    const oracle::PairTable table = oracle::pair_table(m, k);
    const auto s = assemble_single_layer(m, Wavenumber(k), QuadratureSpec{});
    CHECK(max_relative(s.matrix, oracle::single_layer(table)) < 1e-6);
    CHECK(asymmetry(s.matrix) <= 1e-10);
    const auto t = assemble_hypersingular(m, Wavenumber(k), QuadratureSpec{});
    REQUIRE(t.matrix.rows() == 1);
    CHECK(max_relative(t.matrix, oracle::hypersingular(m, t.basis, k, table)) < 1e-6);
}

TEST_CASE("coincident triangle with the static kernel matches a Duffy oracle")
{
    ScreenPanelMesh m;
    m.dimension = 3;
    m.vertices = {Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0)};
    m.panels = {{0, 1, 2}};
    flag_boundary(m);
    std::vector<PairNode> nodes;
    pair_nodes(m, 0, 0, PairKind::Coincident, 10, nodes);
    double s = 0.0;
    for (const auto& n : nodes) s += n.w / (4.0 * kPi * n.d.norm());
    const double ref = oracle::pair_3d(m, 0, 0, 1e-12, oracle::Grading{8, 10})[0].real();
    CHECK(std::abs(s - ref) < 1e-7 * ref);
}

TEST_CASE("small-k hypersingular reduces to the single layer of the derivative basis")
{
    const auto m = interval_mesh(6);
    const double k = 1e-5;
    const auto t = assemble_hypersingular(m, Wavenumber(k), QuadratureSpec{});
    const auto s = assemble_single_layer(m, Wavenumber(k), QuadratureSpec{});
    ComplexMatrix ref = ComplexMatrix::Zero(t.matrix.rows(), t.matrix.cols());
    for (std::size_t p = 0; p < m.panel_count(); ++p)
        for (std::size_t q = 0; q < m.panel_count(); ++q)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const long i = t.basis.local_dof(m, p, a), j = t.basis.local_dof(m, q, b);
                    if (i < 0 || j < 0) continue;
                    ref(i, j) -= shape_gradient(m, p, a).dot(shape_gradient(m, q, b)) *
                                 s.matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
                }
    CHECK((t.matrix - ref).cwiseAbs().maxCoeff() <= 1e-8 * ref.cwiseAbs().maxCoeff());
}

TEST_CASE("regular-rule entries converge with order")
{
    const auto m = interval_mesh(8);
    std::vector<Complex> vals;
    for (int order : {2, 4, 6}) {
        QuadratureSpec q;
        q.regular = order;
        vals.push_back(assemble_single_layer(m, Wavenumber(4.0), q).matrix(0, 7));
    }
    CHECK(std::abs(vals[2] - vals[1]) * 10.0 <= std::abs(vals[1] - vals[0]));
}

TEST_CASE("panel relabelling permutes the matrix")
{
    auto m = mesh(unit_screen(3), 0.6);
    const auto a = assemble_single_layer(m, Wavenumber(3.0), QuadratureSpec{}).matrix;
    auto perm = m;
    std::reverse(perm.panels.begin(), perm.panels.end());
    const auto b = assemble_single_layer(perm, Wavenumber(3.0), QuadratureSpec{}).matrix;
    const auto n = a.rows();
    double diff = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) diff = std::max(diff, std::abs(a(i, j) - b(n - 1 - i, n - 1 - j)));
    CHECK(diff <= 1e-8 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("complex symmetry of 3D hypersingular and prefractal systems")
{
    const auto m = mesh(unit_screen(3), 0.3);
    CHECK(asymmetry(assemble_hypersingular(m, Wavenumber(4.0), QuadratureSpec{}).matrix) <= 1e-10);
    const auto c = mesh(PrefractalFamily{CantorFamily{}}.generate(3), 1.0 / 54.0);
    CHECK(asymmetry(assemble_single_layer(c, Wavenumber(5.0), QuadratureSpec{}).matrix) <= 1e-10);
}

TEST_CASE("empty hat basis and dumps")
{
    const auto one = interval_mesh(1);
    CHECK(make_basis(one, BasisKind::PiecewiseLinearZeroBoundary).dimension() == 0);
    CHECK_THROWS_AS(assemble_hypersingular(one, Wavenumber(1.0), QuadratureSpec{}), InvalidInput);

    ComplexMatrix a(1, 2);
    a << Complex(1.5, -2.0), Complex(0.25, 3.0);
    std::ostringstream js;
    write_matrix_json(js, a);
    CHECK(js.str().find("\"rows\"") != std::string::npos);
    std::ostringstream bin;
    write_matrix_binary(bin, a);
    CHECK(bin.str().size() == 16 + 4 * 8);
}
