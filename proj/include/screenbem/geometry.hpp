#pragma once

// Prefractal screen families, dyadic grid approximations and panel meshing.
//
// Every screen lies in the hyperplane x_n = 0. In 2D a region is a list of
// intervals on the x_1 axis; in 3D a list of convex polygons (triangles or
// axis-aligned rectangles) in the (x_1, x_2) plane.

#include "screenbem/types.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace screenbem {

struct Interval {
    double a = 0.0;
    double b = 0.0;
    double length() const { return b - a; }
};

// Convex polygon with counter-clockwise vertices.
struct Polygon {
    std::vector<Vec2> vertices;
    double area() const;
    double diameter() const;
};

// Which limiting-geometry convention a region belongs to: closed screens
// approximated by decreasing compact sets, open screens by increasing open
// sets.
enum class RegionKind { Open, Closed };

struct ScreenRegion {
    int dimension = 2;
    std::vector<Interval> intervals;  // dimension 2
    std::vector<Polygon> polygons;    // dimension 3
    RegionKind kind = RegionKind::Closed;

    std::size_t cell_count() const { return dimension == 2 ? intervals.size() : polygons.size(); }
    bool empty() const { return cell_count() == 0; }
    double measure() const;
    // Largest cell diameter; the "feature size" of a prefractal level.
    double feature_size() const;
    // Axis-aligned bounding box in 3D coordinates (x_n = 0).
    std::pair<Point, Point> bounding_box() const;
    // Closed-set membership in the plane coordinates (2D uses p.x() only).
    bool contains(const Vec2& p, double tol = 1e-12) const;
};

// Throws InvalidInput unless cells are well formed with positive measure.
void validate(const ScreenRegion& region);

// ---------------------------------------------------------------------------
// Prefractal generators

// E_j of the middle-lambda Cantor construction: 2^j closed intervals of
// length alpha^j with alpha = (1 - lambda) / 2.
std::vector<Interval> cantor_prefractal(double lambda, int level);

// E_j x E_j as 4^j closed squares.
std::vector<Polygon> cantor_dust_prefractal(double lambda, int level);

// Level j >= 1: 3^{j-1} equilateral triangles of side 2^{1-j}; level 1 is the
// unit triangle with lower-left vertex at the origin.
std::vector<Polygon> sierpinski_prefractal(int level);

// Boundary vertices (counter-clockwise) of the level-j Koch snowflake
// polygon: 3 * 4^{j-1} edges.
std::vector<Vec2> koch_polygon(int level);

// Interior of the level-j Koch polygon as a union of triangles of the
// triangular lattice with spacing 3^{1-j}.
ScreenRegion koch_prefractal(int level);

struct SwissCheeseParams {
    int dimension = 3;
    // Radius rule: r_m = 6 eps / (pi m)^2 (n = 3), r_m = 2 exp(-pi^2 m^2 / (6 eps)) (n = 2).
    double epsilon = 0.5;
    // Explicit radii override the rule when non-empty (index m - 1).
    std::vector<double> radii;
    // Explicit centres override the dyadic enumeration when non-empty.
    std::vector<Vec2> centers;
    // Grid resolution 2^{-(level + grid_offset)}.
    int grid_offset = 4;
};

double swiss_cheese_radius(const SwissCheeseParams& params, int m);
Vec2 swiss_cheese_center(const SwissCheeseParams& params, int m);
// Dyadic rational enumeration of the open unit interval/square, m >= 1.
Vec2 dyadic_center(int dimension, int m);

// F_j = closure(Omega) minus the first j open balls, Omega the unit
// interval/square, represented by the dyadic cells not meeting any ball.
ScreenRegion swiss_cheese_prefractal(int level, const SwissCheeseParams& params);

// Dyadic cell approximations with cells of side 2^{-level}.
// Outer: closed cells meeting the region. Inner: cells whose closure lies
// in the interior of the region.
ScreenRegion grid_outer_approx(const ScreenRegion& region, int level);
ScreenRegion grid_inner_approx(const ScreenRegion& region, int level);
// Outer approximation of a single point (measure-zero compact set).
ScreenRegion grid_outer_approx_point(int dimension, const Vec2& point, int level);

// Unit interval/square Gamma_0 minus E_j (n = 2) or E_j x E_j (n = 3);
// open and increasing in j.
ScreenRegion solid_minus_cantor(int dimension, double lambda, int level);
// Gamma_0 intersected with the first j balls of the Swiss cheese sequence.
ScreenRegion solid_minus_swiss_cheese(int level, const SwissCheeseParams& params);
// Union of the first j discs B_{r_m}((s_m, 0)), s_m = (2m+1)/(2m(m+1)),
// r_m = 1/(2m(m+1)), on a dyadic grid of level j + grid_offset.
ScreenRegion irregular_circles(int level, int grid_offset = 4);

// Unit interval (n = 2) or unit square (n = 3).
ScreenRegion unit_screen(int dimension);

// ---------------------------------------------------------------------------
// Families

struct CantorFamily { double lambda = 1.0 / 3.0; };
struct CantorDustFamily { double lambda = 1.0 / 3.0; };
struct SierpinskiFamily {};
struct KochFamily {};
struct SwissCheeseFamily { SwissCheeseParams params; };
struct SolidMinusCantorFamily { int dimension = 2; double lambda = 1.0 / 3.0; };
struct SolidMinusSwissCheeseFamily { SwissCheeseParams params; };
struct IrregularCirclesFamily { int grid_offset = 4; };
struct GridInnerFamily { ScreenRegion base; };
struct GridOuterFamily { ScreenRegion base; };

using FamilyVariant = std::variant<CantorFamily, CantorDustFamily, SierpinskiFamily, KochFamily,
                                   SwissCheeseFamily, SolidMinusCantorFamily,
                                   SolidMinusSwissCheeseFamily, IrregularCirclesFamily,
                                   GridInnerFamily, GridOuterFamily>;

struct PrefractalFamily {
    FamilyVariant variant;

    std::string name() const;
    int dimension() const;
    RegionKind kind() const;
    int first_level() const;
    ScreenRegion generate(int level) const;
};

// ---------------------------------------------------------------------------
// Meshes

struct ScreenPanelMesh {
    int dimension = 2;
    std::vector<Point> vertices;
    // Segments use the first two entries; triangles all three.
    std::vector<std::array<std::size_t, 3>> panels;
    std::vector<bool> boundary;  // per vertex

    std::size_t vertices_per_panel() const { return dimension == 2 ? 2 : 3; }
    std::size_t panel_count() const { return panels.size(); }
    double panel_measure(std::size_t p) const;
    double panel_diameter(std::size_t p) const;
    Point panel_centroid(std::size_t p) const;
    double mesh_size() const;  // max panel diameter
    double total_measure() const;
    std::size_t interior_vertex_count() const;
};

// Splits intervals uniformly (n = 2) or triangulates polygons and applies a
// uniform number of red refinements (n = 3) so every panel diameter is at
// most h. Coincident vertices of neighbouring cells are merged.
ScreenPanelMesh mesh(const ScreenRegion& region, double h);

// Recomputes boundary flags from panel adjacency.
void flag_boundary(ScreenPanelMesh& m);

// Stable content hash of a mesh (hex string).
std::string mesh_hash(const ScreenPanelMesh& m);

}  // namespace screenbem
