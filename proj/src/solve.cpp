#include "screenbem/solve.hpp"

#include "screenbem/parallel.hpp"

#include <Eigen/LU>
#include "json.hpp"

#include <cmath>
#include <ostream>

namespace screenbem {

IncidentField plane_wave(int dimension, const Point& direction, Complex amplitude)
{
    IncidentField f;
    f.kind = IncidentKind::PlaneWave;
    f.dimension = dimension;
    f.direction = direction;
    f.amplitude = amplitude;
    validate(f);
    return f;
}

IncidentField point_source(int dimension, const Point& source, Complex amplitude)
{
    IncidentField f;
    f.kind = IncidentKind::PointSource;
    f.dimension = dimension;
    f.source = source;
    f.amplitude = amplitude;
    validate(f);
    return f;
}

void validate(const IncidentField& field)
{
    require(field.dimension == 2 || field.dimension == 3, "incident field dimension must be 2 or 3");
    require(std::isfinite(field.amplitude.real()) && std::isfinite(field.amplitude.imag()),
            "incident amplitude must be finite");
    if (field.kind == IncidentKind::PlaneWave) {
        require(field.dimension == 3 || field.direction.z() == 0.0, "2D plane wave direction must have zero z");
        require(std::abs(field.direction.norm() - 1.0) < 1e-12, "plane wave direction must be a unit vector");
    } else {
        require(field.dimension == 3 || field.source.z() == 0.0, "2D point source must have zero z");
        require(std::abs(field.source[normal_axis(field.dimension)]) > 0.0,
                "point source must lie off the screen plane");
    }
}

Complex incident_value(const IncidentField& field, const Point& x, Wavenumber k)
{
    if (field.kind == IncidentKind::PlaneWave) {
        return field.amplitude * std::exp(kI * (k.value() * field.direction.dot(x)));
    }
    return field.amplitude * phi(x, field.source, k, field.dimension);
}

Complex incident_normal_derivative(const IncidentField& field, const Point& x, Wavenumber k)
{
    const int axis = normal_axis(field.dimension);
    if (field.kind == IncidentKind::PlaneWave) {
        return kI * k.value() * field.direction[axis] * incident_value(field, x, k);
    }
    const Point diff = x - field.source;
    const double r = diff.norm();
    require(r > 0.0, "evaluation point coincides with the point source");
    return field.amplitude * phi_radial_derivative(r, k.value(), field.dimension) * (diff[axis] / r);
}

ComplexVector rhs_soft(const ScreenPanelMesh& mesh, const BasisSpec& basis, const IncidentField& field,
                       Wavenumber k, int order)
{
    require(basis.kind == BasisKind::PiecewiseConstant, "soft right-hand side needs the piecewise-constant basis");
    require(basis.panel_count == mesh.panel_count(), "basis does not match mesh");
    ComplexVector b = ComplexVector::Zero(static_cast<Eigen::Index>(mesh.panel_count()));
    parallel_for(mesh.panel_count(), [&](std::size_t p) {
        std::vector<PointNode> nodes;
        panel_nodes(mesh, p, order, nodes);
        Complex s = 0.0;
        for (const auto& n : nodes) s += incident_value(field, n.y, k) * n.w;
        b[static_cast<Eigen::Index>(p)] = s;
    });
    return b;
}

ComplexVector rhs_hard(const ScreenPanelMesh& mesh, const BasisSpec& basis, const IncidentField& field,
                       Wavenumber k, int order)
{
    require(basis.kind == BasisKind::PiecewiseLinearZeroBoundary, "hard right-hand side needs the hat basis");
    require(basis.panel_count == mesh.panel_count(), "basis does not match mesh");
    const int nv = static_cast<int>(mesh.vertices_per_panel());
    std::vector<std::array<Complex, 3>> local(mesh.panel_count());
    parallel_for(mesh.panel_count(), [&](std::size_t p) {
        std::vector<PointNode> nodes;
        panel_nodes(mesh, p, order, nodes);
        std::array<Complex, 3> acc{};
        for (const auto& n : nodes) {
            const Complex g = incident_normal_derivative(field, n.y, k) * n.w;
            for (int a = 0; a < nv; ++a) acc[a] += g * n.sy[a];
        }
        local[p] = acc;
    });
    ComplexVector b = ComplexVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    for (std::size_t p = 0; p < mesh.panel_count(); ++p)
        for (int a = 0; a < nv; ++a) {
            const long i = basis.local_dof(mesh, p, a);
            if (i >= 0) b[i] -= local[p][a];
        }
    return b;
}

LinearSolveReport lu_solve(const ComplexMatrix& a, const ComplexVector& b, double tolerance)
{
    require(a.rows() == a.cols() && a.rows() == b.size(), "lu_solve: dimension mismatch");
    LinearSolveReport out;
    out.rhs_inf = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    if (a.rows() == 0) {
        out.x = ComplexVector();
        return out;
    }
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    out.min_pivot = pivots.minCoeff();
    const double max_pivot = pivots.maxCoeff();
    if (!(out.min_pivot > tolerance * max_pivot)) {
        throw NumericalFailure("matrix is singular to working precision: smallest pivot magnitude " +
                               std::to_string(out.min_pivot) + ", largest " + std::to_string(max_pivot));
    }
    out.x = lu.solve(b);
    out.residual_inf = (a * out.x - b).cwiseAbs().maxCoeff();
    if (!out.x.allFinite()) throw NumericalFailure("linear solve produced non-finite values");
    return out;
}

namespace {

DensitySolution finish(const GalerkinSystem& sys, const ComplexVector& b, const IncidentField& field)
{
    DensitySolution s;
    s.problem = sys.problem;
    s.basis = sys.basis;
    s.k = sys.k;
    s.field = field;
    s.quadrature = sys.quadrature;
    const LinearSolveReport r = lu_solve(sys.matrix, b);
    s.coefficients = r.x;
    s.residual_inf = r.residual_inf;
    s.rhs_inf = r.rhs_inf;
    s.min_pivot = r.min_pivot;
    return s;
}

}  // namespace

DensitySolution solve_soft(const ScreenPanelMesh& mesh, Wavenumber k, const IncidentField& field,
                           const QuadratureSpec& quad)
{
    validate(field);
    require(field.dimension == mesh.dimension, "incident field and mesh dimensions differ");
    const GalerkinSystem sys = assemble_single_layer(mesh, k, quad);
    return finish(sys, rhs_soft(mesh, sys.basis, field, k, std::max(5, quad.regular)), field);
}

DensitySolution solve_hard(const ScreenPanelMesh& mesh, Wavenumber k, const IncidentField& field,
                           const QuadratureSpec& quad)
{
    validate(field);
    require(field.dimension == mesh.dimension, "incident field and mesh dimensions differ");
    const BasisSpec basis = make_basis(mesh, BasisKind::PiecewiseLinearZeroBoundary);
    if (basis.dimension() == 0) {
        DensitySolution s;
        s.problem = Problem::Hard;
        s.basis = basis;
        s.k = k.value();
        s.field = field;
        s.quadrature = quad;
        s.coefficients = ComplexVector();
        return s;
    }
    const GalerkinSystem sys = assemble_hypersingular(mesh, k, quad);
    return finish(sys, rhs_hard(mesh, sys.basis, field, k, std::max(5, quad.regular)), field);
}

DensitySolution solve(Problem problem, const ScreenPanelMesh& mesh, Wavenumber k, const IncidentField& field,
                      const QuadratureSpec& quad)
{
    return problem == Problem::Soft ? solve_soft(mesh, k, field, quad) : solve_hard(mesh, k, field, quad);
}

void write_density_json(std::ostream& os, const DensitySolution& s)
{
    nlohmann::ordered_json j;
    j["problem"] = to_string(s.problem);
    j["k"] = s.k;
    j["basis"] = to_string(s.basis.kind);
    j["mesh_hash"] = s.basis.mesh_hash;
    j["residual_inf"] = s.residual_inf;
    j["quadrature"] = {{"regular", s.quadrature.regular},
                       {"near", s.quadrature.near},
                       {"singular", s.quadrature.singular},
                       {"near_plane", s.quadrature.near_plane},
                       {"near_factor", s.quadrature.near_factor}};
    nlohmann::ordered_json c = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
        c.push_back({s.coefficients[i].real(), s.coefficients[i].imag()});
    }
    j["coefficients"] = c;
    os << j.dump(2) << '\n';
}

}  // namespace screenbem
