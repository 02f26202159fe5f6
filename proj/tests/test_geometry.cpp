#include "doctest.h"

#include "screenbem/geometry.hpp"
#include "screenbem/io.hpp"

#include <cmath>
#include <set>
#include <sstream>

using namespace screenbem;

namespace {

ScreenRegion interval_region(std::vector<Interval> iv)
{
    ScreenRegion r;
    r.dimension = 2;
    r.intervals = std::move(iv);
    return r;
}

}  // namespace

TEST_CASE("Cantor prefractal counts, lengths and nesting")
{
    const double lambda = 1.0 / 3.0;
    for (int j = 0; j <= 6; ++j) {
        const auto e = cantor_prefractal(lambda, j);
        REQUIRE(e.size() == (std::size_t{1} << j));
        for (const auto& i : e) CHECK(i.length() == doctest::Approx(std::pow(1.0 / 3.0, j)).epsilon(1e-12));
        if (j > 0) {
            const auto parent = cantor_prefractal(lambda, j - 1);
            for (const auto& i : e) {
                bool inside = false;
                for (const auto& p : parent) inside = inside || (i.a >= p.a - 1e-15 && i.b <= p.b + 1e-15);
                CHECK(inside);
            }
        }
    }
    CHECK(cantor_prefractal(0.5, 2)[1].a == doctest::Approx(0.1875));
}

TEST_CASE("Cantor dust, Sierpinski and Koch generators")
{
    const auto dust = cantor_dust_prefractal(1.0 / 3.0, 2);
    CHECK(dust.size() == 16);
    double area = 0.0;
    for (const auto& p : dust) area += p.area();
    CHECK(area == doctest::Approx(std::pow(4.0 / 9.0, 2)));

    for (int j = 1; j <= 4; ++j) {
        const auto s = sierpinski_prefractal(j);
        CHECK(s.size() == static_cast<std::size_t>(std::pow(3, j - 1)));
        double a = 0.0;
        for (const auto& t : s) a += t.area();
        CHECK(a == doctest::Approx(std::sqrt(3.0) / 4.0 * std::pow(0.75, j - 1)));
    }

    for (int j = 1; j <= 3; ++j) {
        CHECK(koch_polygon(j).size() == 3 * static_cast<std::size_t>(std::pow(4, j - 1)));
        // Area of the level-j snowflake with unit initial side.
        const double a0 = std::sqrt(3.0) / 4.0;
        double area = a0;
        for (int m = 1; m < j; ++m) area += a0 * 3.0 * std::pow(4.0, m - 1) / std::pow(9.0, m);
        CHECK(koch_prefractal(j).measure() == doctest::Approx(area).epsilon(1e-12));
    }
}

TEST_CASE("Swiss cheese radius rule")
{
    SwissCheeseParams p;
    p.dimension = 3;
    p.epsilon = 0.5;
    CHECK(swiss_cheese_radius(p, 2) == doctest::Approx(6.0 * 0.5 / (kPi * kPi * 4.0)));
    p.dimension = 2;
    CHECK(swiss_cheese_radius(p, 1) == doctest::Approx(2.0 * std::exp(-kPi * kPi / 3.0)));
    const auto f1 = swiss_cheese_prefractal(1, SwissCheeseParams{});
    const auto f2 = swiss_cheese_prefractal(2, SwissCheeseParams{});
    CHECK(f1.measure() <= 1.0);
    CHECK(f2.measure() <= f1.measure());
}

TEST_CASE("solid minus Cantor is the complement of E_j in the unit interval")
{
    for (int j = 1; j <= 4; ++j) {
        const auto r = solid_minus_cantor(2, 1.0 / 3.0, j);
        CHECK(r.kind == RegionKind::Open);
        CHECK(r.measure() == doctest::Approx(1.0 - std::pow(2.0 / 3.0, j)));
        CHECK(r.intervals.size() == (std::size_t{1} << j) - 1);
    }
    const auto r3 = solid_minus_cantor(3, 1.0 / 3.0, 1);
    CHECK(r3.measure() == doctest::Approx(1.0 - 1.0 / 9.0 * 4.0));
}

TEST_CASE("grid approximations nest around the region")
{
    const auto base = interval_region({{0.1, 0.6}});
    const auto outer = grid_outer_approx(base, 4);
    const auto inner = grid_inner_approx(base, 4);
    CHECK(outer.measure() >= base.measure());
    CHECK(inner.measure() <= base.measure());
    CHECK(outer.measure() - inner.measure() <= 4.0 / 16.0 + 1e-12);
    CHECK(grid_outer_approx_point(2, Vec2(0.5, 0.0), 3).measure() == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("invalid regions are rejected")
{
    CHECK_THROWS_AS(validate(interval_region({{0.5, 0.2}})), InvalidInput);
    CHECK_THROWS_AS(cantor_prefractal(1.2, 2), InvalidInput);
    CHECK_THROWS_AS(sierpinski_prefractal(0), InvalidInput);
}

TEST_CASE("2D meshes split intervals uniformly and flag endpoints")
{
    const auto region = interval_region(cantor_prefractal(1.0 / 3.0, 2));
    const auto m = mesh(region, 1.0 / 18.0);
    CHECK(m.panel_count() == 8);
    CHECK(m.mesh_size() <= 1.0 / 18.0 + 1e-15);
    CHECK(m.total_measure() == doctest::Approx(4.0 / 9.0));
    std::size_t b = 0;
    for (bool f : m.boundary) b += f;
    CHECK(b == 8);
    CHECK(m.interior_vertex_count() == 4);
}

TEST_CASE("3D meshes conform and cover the region")
{
    const auto region = unit_screen(3);
    const auto m = mesh(region, 0.3);
    CHECK(m.mesh_size() <= 0.3);
    CHECK(m.total_measure() == doctest::Approx(1.0));
    // Euler characteristic of a disc: V - E + F = 1.
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& t : m.panels)
        for (int a = 0; a < 3; ++a) edges.insert(std::minmax(t[a], t[(a + 1) % 3]));
    CHECK(static_cast<long>(m.vertices.size()) - static_cast<long>(edges.size()) +
              static_cast<long>(m.panel_count()) ==
          1);
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        const Point& p = m.vertices[v];
        const bool on_edge = p.x() == 0.0 || p.x() == 1.0 || p.y() == 0.0 || p.y() == 1.0;
        CHECK(m.boundary[v] == on_edge);
    }
}

TEST_CASE("adjacent cells share vertices after meshing")
{
    // Sierpinski level-2 triangles touch at single points.
    const auto s = PrefractalFamily{SierpinskiFamily{}}.generate(2);
    const auto m = mesh(s, 0.5);
    CHECK(m.total_measure() == doctest::Approx(s.measure()));
    CHECK(m.vertices.size() == 6);
    CHECK(m.interior_vertex_count() == 0);
    // Koch interior mesh is conforming with all lattice triangles inside.
    const auto k = koch_prefractal(2);
    const auto km = mesh(k, 1.0);
    CHECK(km.total_measure() == doctest::Approx(k.measure()));
}

TEST_CASE("mesh hash and JSON round trip")
{
    const auto m = mesh(PrefractalFamily{CantorDustFamily{}}.generate(1), 0.2);
    std::stringstream ss;
    write_mesh_json(ss, m);
    const auto back = read_mesh_json(ss);
    CHECK(back.vertices == m.vertices);
    CHECK(back.panels == m.panels);
    CHECK(back.boundary == m.boundary);
    CHECK(mesh_hash(back) == mesh_hash(m));
    const auto other = mesh(PrefractalFamily{CantorDustFamily{}}.generate(1), 0.1);
    CHECK(mesh_hash(other) != mesh_hash(m));
    CHECK_THROWS_AS(parse_mesh_json("{\"dimension\": 2}"), InvalidInput);
    CHECK_THROWS_AS(parse_mesh_json("not json"), InvalidInput);
}

TEST_CASE("families report dimension, kind and first level")
{
    CHECK(PrefractalFamily{CantorFamily{}}.dimension() == 2);
    CHECK(PrefractalFamily{CantorDustFamily{}}.dimension() == 3);
    CHECK(PrefractalFamily{KochFamily{}}.kind() == RegionKind::Open);
    CHECK(PrefractalFamily{SierpinskiFamily{}}.kind() == RegionKind::Closed);
    CHECK(PrefractalFamily{SierpinskiFamily{}}.first_level() == 1);
    CHECK_THROWS_AS(PrefractalFamily{SierpinskiFamily{}}.generate(0), InvalidInput);
}
