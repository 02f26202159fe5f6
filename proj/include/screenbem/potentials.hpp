#pragma once

// Layer potentials, scattered/total fields, far-field patterns and
// one-sided trace diagnostics.

#include "screenbem/solve.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace screenbem {

enum class FieldContent { Scattered, Total, Incident, SingleLayer, DoubleLayer };
std::string to_string(FieldContent c);

struct FieldGrid {
    int dimension = 2;
    FieldContent content = FieldContent::Scattered;
    std::vector<Point> points;
    std::vector<Complex> values;
    // Point closer than 0.1 h to the screen: computed, lower accuracy.
    std::vector<bool> near_screen;
};

// Points of a regular rectangular sampling of the plane spanned by axes
// (a, b) through `origin`, row-major with `na` x `nb` samples.
std::vector<Point> grid_points(const Point& origin, int axis_a, double length_a, int na, int axis_b,
                               double length_b, int nb);

// S phi(x) = int Phi(x, y) phi(y) ds(y).
FieldGrid eval_single_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis, const ComplexVector& density,
                            const std::vector<Point>& points, Wavenumber k, const QuadratureSpec& quad = {});
// D psi(x) = int dPhi(x, y)/dn(y) psi(y) ds(y), n = +e_n.
FieldGrid eval_double_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis, const ComplexVector& density,
                            const std::vector<Point>& points, Wavenumber k, const QuadratureSpec& quad = {});
// d/dx_n of S phi.
FieldGrid eval_single_layer_normal_derivative(const ScreenPanelMesh& mesh, const BasisSpec& basis,
                                              const ComplexVector& density, const std::vector<Point>& points,
                                              Wavenumber k, const QuadratureSpec& quad = {});

// Soft: u^s = -S[d_n u]; hard: u^s = +D[u].
FieldGrid scattered_field(const ScreenPanelMesh& mesh, const DensitySolution& solution,
                          const std::vector<Point>& points);
FieldGrid total_field(const ScreenPanelMesh& mesh, const DensitySolution& solution, const std::vector<Point>& points);
FieldGrid incident_field(const IncidentField& field, const std::vector<Point>& points, Wavenumber k);

struct FarFieldPattern {
    int dimension = 2;
    std::vector<Point> directions;
    std::vector<Complex> values;
    std::string convention;
};

// u^s(r xhat) ~ P(r) F(xhat) with P(r) = exp(ikr) / (4 pi r) for n = 3 and
// (i/4) sqrt(2 / (pi k r)) exp(i(kr - pi/4)) for n = 2.
Complex far_field_prefactor(double r, double k, int dimension);
FarFieldPattern far_field(const ScreenPanelMesh& mesh, const DensitySolution& solution,
                          const std::vector<Point>& directions);

// Unit directions: a ring in the (x_1, x_n) plane (n = 2) or a Fibonacci
// sphere (n = 3).
std::vector<Point> unit_directions(int dimension, int count);

// Far-zone diagnostics about the centre c of the mesh bounding box:
// |u^s(c + r xhat)| r^((n-1)/2) over r in [50/k, 100/k], and u^s(c + r xhat)
// against prefactor(r) e^{ik xhat.c} F(xhat) at kr = 200.
struct RadiationReport {
    Point centre = Point::Zero();
    double max_decay_variation = 0.0;  // max over xhat of (max - min) / max
    double max_far_field_error = 0.0;  // max over xhat, relative to max |F|
    double max_pointwise_error = 0.0;  // max over xhat, relative to |F(xhat)|
};

RadiationReport radiation_check(const ScreenPanelMesh& mesh, const DensitySolution& solution,
                                const std::vector<Point>& directions, int radii = 11);

struct JumpSample {
    Point midpoint;
    Complex density;      // phi or psi at the midpoint
    Complex plus;         // extrapolated limit from x_n > 0
    Complex minus;        // extrapolated limit from x_n < 0
    Complex expected_plus;
    Complex expected_minus;
};

struct JumpReport {
    std::string identity;
    std::vector<double> epsilons;
    std::vector<JumpSample> samples;
    double max_relative_error = 0.0;  // |limit - expected| / |expected| over both sides
    double max_relative_jump = 0.0;   // |plus - minus| / |plus| for zero-jump identities
};

// Offsets eps_i * diameter, first-order Richardson on the two smallest.
inline const std::vector<double> kJumpEpsilons{1e-2, 5e-3, 2.5e-3};

// d_n(S phi)(x +- eps e_n) -> -+ phi / 2 and [S phi] = 0 at midpoints of panels
// not touching the boundary.
JumpReport jump_check_single_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis,
                                   const ComplexVector& density, Wavenumber k, const QuadratureSpec& quad = {},
                                   const std::vector<double>& epsilons = kJumpEpsilons);
// (D psi)(x +- eps e_n) -> +- psi / 2.
JumpReport jump_check_double_layer(const ScreenPanelMesh& mesh, const BasisSpec& basis,
                                   const ComplexVector& density, Wavenumber k, const QuadratureSpec& quad = {},
                                   const std::vector<double>& epsilons = kJumpEpsilons);

// Limit at eps = 0 of a value behaving like v0 + c eps.
Complex richardson_first_order(double eps_coarse, Complex coarse, double eps_fine, Complex fine);

void write_field_csv(std::ostream& os, const FieldGrid& f);
void write_field_json(std::ostream& os, const FieldGrid& f);
void write_far_field_csv(std::ostream& os, const FarFieldPattern& f);
void write_far_field_json(std::ostream& os, const FarFieldPattern& f);

}  // namespace screenbem
