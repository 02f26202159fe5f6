#pragma once

// Incident fields, right-hand sides and dense solves for the jump densities.

#include "screenbem/assembly.hpp"

#include <iosfwd>

namespace screenbem {

enum class IncidentKind { PlaneWave, PointSource };

struct IncidentField {
    IncidentKind kind = IncidentKind::PlaneWave;
    int dimension = 2;
    Point direction = Point(0.0, -1.0, 0.0);  // plane wave, unit length
    Point source = Point::Zero();             // point source, off the screen plane
    Complex amplitude = 1.0;                  // A exp(ik d.x) or C Phi(x, y)
};

IncidentField plane_wave(int dimension, const Point& direction, Complex amplitude = 1.0);
IncidentField point_source(int dimension, const Point& source, Complex amplitude = 1.0);
void validate(const IncidentField& field);

Complex incident_value(const IncidentField& field, const Point& x, Wavenumber k);
// Derivative along +e_n.
Complex incident_normal_derivative(const IncidentField& field, const Point& x, Wavenumber k);

// b_p = int_p u^i ds over piecewise constants.
ComplexVector rhs_soft(const ScreenPanelMesh& mesh, const BasisSpec& basis, const IncidentField& field,
                       Wavenumber k, int order = 5);
// b_i = -int d_n u^i lambda_i ds over interior hats.
ComplexVector rhs_hard(const ScreenPanelMesh& mesh, const BasisSpec& basis, const IncidentField& field,
                       Wavenumber k, int order = 5);

struct LinearSolveReport {
    ComplexVector x;
    double residual_inf = 0.0;  // ||Ax - b||_inf
    double rhs_inf = 0.0;
    double min_pivot = 0.0;     // smallest |U_ii|
};

// Dense LU with partial pivoting. Throws NumericalFailure when the smallest
// pivot is below tolerance * largest pivot.
LinearSolveReport lu_solve(const ComplexMatrix& a, const ComplexVector& b, double tolerance = 1e-13);

struct DensitySolution {
    Problem problem = Problem::Soft;
    ComplexVector coefficients;
    BasisSpec basis;
    double k = 1.0;
    IncidentField field;
    QuadratureSpec quadrature;
    double residual_inf = 0.0;
    double rhs_inf = 0.0;
    double min_pivot = 0.0;
};

DensitySolution solve_soft(const ScreenPanelMesh& mesh, Wavenumber k, const IncidentField& field,
                           const QuadratureSpec& quad = {});
// An empty interior-hat basis yields the explicit zero solution.
DensitySolution solve_hard(const ScreenPanelMesh& mesh, Wavenumber k, const IncidentField& field,
                           const QuadratureSpec& quad = {});
DensitySolution solve(Problem problem, const ScreenPanelMesh& mesh, Wavenumber k, const IncidentField& field,
                      const QuadratureSpec& quad = {});

// JSON {problem, k, basis, mesh_hash, coefficients: [[re, im], ...]}.
void write_density_json(std::ostream& os, const DensitySolution& s);

}  // namespace screenbem
