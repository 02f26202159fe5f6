#include "screenbem/assembly.hpp"

#include "screenbem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <utility>

namespace screenbem {

std::string to_string(BasisKind kind)
{
    return kind == BasisKind::PiecewiseConstant ? "piecewise_constant" : "piecewise_linear_zero_boundary";
}

std::string to_string(Problem problem) { return problem == Problem::Soft ? "soft" : "hard"; }

std::size_t BasisSpec::dimension() const
{
    return kind == BasisKind::PiecewiseConstant ? panel_count : dof_vertex.size();
}

long BasisSpec::local_dof(const ScreenPanelMesh& mesh, std::size_t p, int a) const
{
    if (kind == BasisKind::PiecewiseConstant) return a == 0 ? static_cast<long>(p) : -1;
    return vertex_dof[mesh.panels[p][a]];
}

Complex BasisSpec::evaluate(const ScreenPanelMesh& mesh, const ComplexVector& coefficients, std::size_t p,
                            const std::array<double, 3>& s) const
{
    if (kind == BasisKind::PiecewiseConstant) return coefficients[static_cast<Eigen::Index>(p)];
    Complex v = 0.0;
    for (std::size_t a = 0; a < mesh.vertices_per_panel(); ++a) {
        const long d = vertex_dof[mesh.panels[p][a]];
        if (d >= 0) v += s[a] * coefficients[d];
    }
    return v;
}

BasisSpec make_basis(const ScreenPanelMesh& mesh, BasisKind kind)
{
    BasisSpec b;
    b.kind = kind;
    b.mesh_hash = mesh_hash(mesh);
    b.panel_count = mesh.panel_count();
    if (kind == BasisKind::PiecewiseLinearZeroBoundary) {
        b.vertex_dof.assign(mesh.vertices.size(), -1);
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            if (mesh.boundary[v]) continue;
            b.vertex_dof[v] = static_cast<long>(b.dof_vertex.size());
            b.dof_vertex.push_back(v);
        }
    }
    return b;
}

BasisKind basis_for(Problem problem)
{
    return problem == Problem::Soft ? BasisKind::PiecewiseConstant : BasisKind::PiecewiseLinearZeroBoundary;
}

Point shape_gradient(const ScreenPanelMesh& mesh, std::size_t p, int a)
{
    const auto& v = mesh.panels[p];
    if (mesh.dimension == 2) {
        const Point e = mesh.vertices[v[1]] - mesh.vertices[v[0]];
        const Point g = e / e.squaredNorm();
        return a == 0 ? Point(-g) : g;
    }
    const Point& p0 = mesh.vertices[v[0]];
    const Point& p1 = mesh.vertices[v[1]];
    const Point& p2 = mesh.vertices[v[2]];
    const double area2 = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
    const Point e = mesh.vertices[v[(a + 2) % 3]] - mesh.vertices[v[(a + 1) % 3]];
    return Point(-e.y(), e.x(), 0.0) / area2;
}

PairIntegrals integrate_pair(const ScreenPanelMesh& mesh, double k, const std::vector<PairNode>& nodes)
{
    PairIntegrals out;
    const int dim = mesh.dimension;
    for (const auto& n : nodes) {
        const Complex f = phi_radial(n.d.norm(), k, dim) * n.w;
        out.s += f;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.m[a][b] += f * (n.sx[a] * n.sy[b]);
    }
    return out;
}

namespace {

void check_finite(const PairIntegrals& r, std::size_t p, std::size_t q)
{
    bool ok = std::isfinite(r.s.real()) && std::isfinite(r.s.imag());
    for (const auto& row : r.m)
        for (const auto& v : row) ok = ok && std::isfinite(v.real()) && std::isfinite(v.imag());
    if (!ok) {
        throw NumericalFailure("non-finite quadrature value for panel pair (" + std::to_string(p) + ", " +
                               std::to_string(q) + ")");
    }
}

AssemblyObserver& observer()
{
    static AssemblyObserver o;
    return o;
}

void notify(const GalerkinSystem& sys)
{
    if (observer()) observer()(sys);
}

}  // namespace

void set_assembly_observer(AssemblyObserver o)
{
    observer() = std::move(o);
}

GalerkinSystem assemble_single_layer(const ScreenPanelMesh& mesh, Wavenumber k, const QuadratureSpec& quad)
{
    validate(quad);
    require(mesh.panel_count() > 0, "cannot assemble on an empty mesh");
    GalerkinSystem sys;
    sys.problem = Problem::Soft;
    sys.basis = make_basis(mesh, BasisKind::PiecewiseConstant);
    sys.k = k.value();
    sys.quadrature = quad;
    const auto n = static_cast<Eigen::Index>(mesh.panel_count());
    sys.matrix = ComplexMatrix::Zero(n, n);

    // Only q >= p is integrated; the transpose entry is copied so the
    // matrix is exactly complex symmetric.
    parallel_for(mesh.panel_count(), [&](std::size_t p) {
        std::vector<PairNode> nodes;
        for (std::size_t q = p; q < mesh.panel_count(); ++q) {
            pair_nodes(mesh, p, q, quad, nodes);
            Complex s = 0.0;
            for (const auto& nd : nodes) s += phi_radial(nd.d.norm(), k.value(), mesh.dimension) * nd.w;
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
                throw NumericalFailure("non-finite quadrature value for panel pair (" + std::to_string(p) + ", " +
                                       std::to_string(q) + ")");
            }
            sys.matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = s;
            sys.matrix(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = s;
        }
    });
    notify(sys);
    return sys;
}

GalerkinSystem assemble_hypersingular(const ScreenPanelMesh& mesh, Wavenumber k, const QuadratureSpec& quad)
{
    validate(quad);
    require(mesh.panel_count() > 0, "cannot assemble on an empty mesh");
    GalerkinSystem sys;
    sys.problem = Problem::Hard;
    sys.basis = make_basis(mesh, BasisKind::PiecewiseLinearZeroBoundary);
    sys.k = k.value();
    sys.quadrature = quad;
    const std::size_t ndof = sys.basis.dimension();
    if (ndof == 0) {
        throw InvalidInput("hypersingular basis is empty: the mesh has no interior vertices");
    }
    sys.matrix = ComplexMatrix::Zero(static_cast<Eigen::Index>(ndof), static_cast<Eigen::Index>(ndof));

    const std::size_t np = mesh.panel_count();
    const int nv = static_cast<int>(mesh.vertices_per_panel());
    const double k2 = k.value() * k.value();

    // Panels carrying no dof contribute nothing.
    std::vector<std::size_t> active;
    for (std::size_t p = 0; p < np; ++p) {
        bool any = false;
        for (int a = 0; a < nv; ++a) any = any || sys.basis.local_dof(mesh, p, a) >= 0;
        if (any) active.push_back(p);
    }

    using Local = std::array<std::array<Complex, 3>, 3>;
    const std::size_t block = 32;
    std::vector<std::vector<Local>> rows(block);
    for (std::size_t start = 0; start < active.size(); start += block) {
        const std::size_t stop = std::min(active.size(), start + block);
        parallel_for(stop - start, [&](std::size_t r) {
            const std::size_t ip = start + r;
            const std::size_t p = active[ip];
            auto& row = rows[r];
            row.assign(active.size() - ip, Local{});
            std::vector<PairNode> nodes;
            for (std::size_t iq = ip; iq < active.size(); ++iq) {
                const std::size_t q = active[iq];
                pair_nodes(mesh, p, q, quad, nodes);
                PairIntegrals in = integrate_pair(mesh, k.value(), nodes);
                check_finite(in, p, q);
                Local& loc = row[iq - ip];
                for (int a = 0; a < nv; ++a)
                    for (int b = 0; b < nv; ++b) {
                        const double g = shape_gradient(mesh, p, a).dot(shape_gradient(mesh, q, b));
                        loc[a][b] = -(g * in.s - k2 * in.m[a][b]);
                    }
                if (p == q) {
                    for (int a = 0; a < nv; ++a)
                        for (int b = a + 1; b < nv; ++b) loc[a][b] = loc[b][a] = 0.5 * (loc[a][b] + loc[b][a]);
                }
            }
        });
        // Serial scatter in a fixed order keeps sums independent of threading.
        for (std::size_t r = 0; r < stop - start; ++r) {
            const std::size_t ip = start + r;
            const std::size_t p = active[ip];
            for (std::size_t iq = ip; iq < active.size(); ++iq) {
                const std::size_t q = active[iq];
                const Local& loc = rows[r][iq - ip];
                for (int a = 0; a < nv; ++a) {
                    const long i = sys.basis.local_dof(mesh, p, a);
                    if (i < 0) continue;
                    for (int b = 0; b < nv; ++b) {
                        const long j = sys.basis.local_dof(mesh, q, b);
                        if (j < 0) continue;
                        sys.matrix(i, j) += loc[a][b];
                        if (p != q) sys.matrix(j, i) += loc[a][b];
                    }
                }
            }
        }
    }
    notify(sys);
    return sys;
}

void write_matrix_json(std::ostream& os, const ComplexMatrix& a)
{
    os << std::setprecision(17);
    os << "{\"rows\": " << a.rows() << ", \"cols\": " << a.cols() << ", \"layout\": \"row-major [re, im]\", \"data\": [";
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (i + j > 0) os << ", ";
            os << '[' << a(i, j).real() << ", " << a(i, j).imag() << ']';
        }
    os << "]}\n";
}

void write_matrix_binary(std::ostream& os, const ComplexMatrix& a)
{
    const std::uint64_t header[2] = {static_cast<std::uint64_t>(a.rows()), static_cast<std::uint64_t>(a.cols())};
    os.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double v[2] = {a(i, j).real(), a(i, j).imag()};
            os.write(reinterpret_cast<const char*>(v), sizeof(v));
        }
}

}  // namespace screenbem
