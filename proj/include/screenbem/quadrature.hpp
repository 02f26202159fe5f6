#pragma once

// Quadrature for panel pairs and for point-to-panel integrals.
//
// Pair rules produce nodes (x, y, weight) together with the barycentric
// coordinates of x in the test panel and y in the trial panel, so a caller
// can weight any kernel by piecewise-linear shape functions. Weights include
// the panel Jacobians: sum(w) = |panel_x| * |panel_y|.
//
//   regular          tensor Gauss-Legendre (collapsed on triangles)
//   near-singular    composite rules when panels are closer than their size
//   coincident/edge/vertex (3D)
//                    Sauter-Schwab relative-coordinate transforms, which make
//                    the 1/r kernel analytic in the transformed variables
//   coincident/adjacent (2D)
//                    relative coordinates plus a geometrically graded rule in
//                    the variable carrying the log singularity

#include "screenbem/geometry.hpp"
#include "screenbem/types.hpp"

#include <array>
#include <vector>

namespace screenbem {

struct QuadratureSpec {
    int regular = 5;      // Gauss points per coordinate, well-separated pairs
    int near = 10;        // composite order when distance < near_factor * size
    int singular = 8;     // points per coordinate in the singular transforms
    int near_plane = 16;  // order for evaluation points very close to a panel
    double near_factor = 1.0;
};

void validate(const QuadratureSpec& spec);

struct Rule1D {
    std::vector<double> x;  // nodes in [0, 1]
    std::vector<double> w;  // weights summing to 1
};

// Gauss-Legendre on [0, 1]; rules are cached, n in [1, 128].
const Rule1D& gauss_legendre(int n);

// Composite Gauss rule on [0, 1] graded geometrically towards 0:
// breakpoints 0, sigma^levels, ..., sigma, 1.
Rule1D graded_rule(int order, int levels, double sigma = 0.15);

struct TriangleNode {
    double a1;  // barycentric weight of vertex 1
    double a2;  // barycentric weight of vertex 2
    double w;   // reference weights sum to 1/2
};

// Collapsed (Duffy) Gauss rule on the reference triangle (0,0),(1,0),(0,1).
std::vector<TriangleNode> triangle_rule(int n);

enum class PairKind { Regular, Near, Coincident, Edge, Vertex };

struct PairNode {
    Point x;
    Point y;
    double w;
    std::array<double, 3> sx;  // barycentric coordinates of x in panel p
    std::array<double, 3> sy;  // barycentric coordinates of y in panel q
    Point d;                   // x - y from relative coordinates (exact near the diagonal)
};

// Reference node pairs of the Sauter-Schwab rules on two copies of the
// reference triangle. The common vertices sit at positions 0 (vertex case)
// or 0, 1 (edge case). Weights sum to 1/4.
struct ReferencePairNode {
    TriangleNode x;
    TriangleNode y;
};
std::vector<ReferencePairNode> sauter_schwab_rule(PairKind kind, int n);

PairKind classify_pair(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, const QuadratureSpec& spec);

// Quadrature nodes for the integral over panel p (x) times panel q (y).
void pair_nodes(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, const QuadratureSpec& spec,
                std::vector<PairNode>& out);

// Same, with the classification forced (used by tests of each routine).
void pair_nodes(const ScreenPanelMesh& mesh, std::size_t p, std::size_t q, PairKind kind, int order,
                std::vector<PairNode>& out);

struct PointNode {
    Point y;
    double w;
    std::array<double, 3> sy;
};

// Nodes for the integral over panel p of a kernel singular at the (off-panel)
// point x. Regular Gauss beyond 3 * near_factor panel diameters, otherwise the panel is split at the
// foot point of x and integrated with graded composite rules.
void point_nodes(const ScreenPanelMesh& mesh, std::size_t p, const Point& x, const QuadratureSpec& spec,
                 std::vector<PointNode>& out);

// Distance from x to panel p.
double point_panel_distance(const ScreenPanelMesh& mesh, std::size_t p, const Point& x);

// Plain rule on panel p with n Gauss points per coordinate.
void panel_nodes(const ScreenPanelMesh& mesh, std::size_t p, int n, std::vector<PointNode>& out);

}  // namespace screenbem
