#pragma once

// Galerkin matrices of the single-layer form a_S and the hypersingular
// form a_T over piecewise-constant and interior-hat discrete spaces.

#include "screenbem/geometry.hpp"
#include "screenbem/quadrature.hpp"
#include "screenbem/specialfn.hpp"
#include "screenbem/types.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace screenbem {

enum class BasisKind { PiecewiseConstant, PiecewiseLinearZeroBoundary };
enum class Problem { Soft, Hard };

std::string to_string(BasisKind kind);
std::string to_string(Problem problem);

struct BasisSpec {
    BasisKind kind = BasisKind::PiecewiseConstant;
    std::string mesh_hash;
    // Hat functions: vertex -> dof (-1 on boundary vertices) and back.
    std::vector<long> vertex_dof;
    std::vector<std::size_t> dof_vertex;
    std::size_t panel_count = 0;

    std::size_t dimension() const;
    // Dof carried by local slot a of panel p, or -1.
    long local_dof(const ScreenPanelMesh& mesh, std::size_t p, int a) const;
    // Density value at a point of panel p with barycentric coordinates s.
    Complex evaluate(const ScreenPanelMesh& mesh, const ComplexVector& coefficients, std::size_t p,
                     const std::array<double, 3>& s) const;
};

BasisSpec make_basis(const ScreenPanelMesh& mesh, BasisKind kind);
BasisKind basis_for(Problem problem);

struct GalerkinSystem {
    Problem problem = Problem::Soft;
    ComplexMatrix matrix;
    BasisSpec basis;
    double k = 1.0;
    QuadratureSpec quadrature;
};

// A_pq = int_p int_q Phi(x, y) ds(y) ds(x), piecewise-constant basis.
GalerkinSystem assemble_single_layer(const ScreenPanelMesh& mesh, Wavenumber k, const QuadratureSpec& quad);

// Matrix of the hypersingular operator T = d/dn (double layer) in the
// interior-hat basis, assembled through the flat-screen identity
//   <T lambda_j, lambda_i> = -int int Phi(x, y) [grad lambda_j(y) . grad lambda_i(x)
//                                                - k^2 lambda_j(y) lambda_i(x)].
GalerkinSystem assemble_hypersingular(const ScreenPanelMesh& mesh, Wavenumber k, const QuadratureSpec& quad);

// Called with every assembled system (diagnostics); pass {} to clear.
using AssemblyObserver = std::function<void(const GalerkinSystem&)>;
void set_assembly_observer(AssemblyObserver observer);

// Tangential gradient of the barycentric function of local vertex a.
Point shape_gradient(const ScreenPanelMesh& mesh, std::size_t p, int a);

// Kernel integrals over one panel pair: s = int int Phi, m[a][b] = int int Phi s_a(x) s_b(y).
struct PairIntegrals {
    Complex s = 0.0;
    std::array<std::array<Complex, 3>, 3> m{};
};
PairIntegrals integrate_pair(const ScreenPanelMesh& mesh, double k, const std::vector<PairNode>& nodes);

// Row-major dump: JSON {"rows", "cols", "data": [[re, im], ...]} or raw
// little-endian binary (uint64 rows, uint64 cols, then re/im doubles).
void write_matrix_json(std::ostream& os, const ComplexMatrix& a);
void write_matrix_binary(std::ostream& os, const ComplexMatrix& a);

}  // namespace screenbem
