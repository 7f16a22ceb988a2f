#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "memsfbp/grid.hpp"
#include "memsfbp/params.hpp"
#include "memsfbp/state.hpp"

namespace memsfbp {

// ---------------------------------------------------------------------------
// Transformed potential problem on the reference rectangle Omega = I x (0,1).
//
// The gap region between the membranes is mapped onto Omega by
// T(x,z) = (x, (z - v)/(u - v)). Under T the anisotropic Laplacian
// eps^2 dxx + dzz becomes the variable-coefficient operator
//
//   L w = eps^2 w_xx - 2 eps^2 (S/g) w_xz + ((1 + eps^2 S^2)/g^2) w_zz
//         + eps^2 ( 2 (u_x - v_x) S / g^2 - S_xx-part / g ) w_z
//
// with  g = u - v,  S(x,z') = z'(u_x - v_x) + v_x  and the first-order
// coefficient spelled out in assemble_operator. The shifted potential
// psi = phi_tilde - z' solves  -L psi = f  with homogeneous Dirichlet data,
// where f = L z' carries all membrane derivatives (and a global eps^2).
// ---------------------------------------------------------------------------

/// Membrane-derivative fields entering the mapped operator, sampled on the
/// x-nodes: first and second differences of u and v (central interior,
/// second-order one-sided at x = +-1) and the gap.
struct MembraneDerivs {
    std::vector<double> ux, vx, uxx, vxx, gap;
};

MembraneDerivs membrane_derivs(const MembraneState& s);

/// Discrete -L with second-order central differences; the mixed term uses the
/// 4-point cross stencil. Rows of boundary nodes encode the identity, so the
/// matrix acts on all (N_x+1)(N_z+1) nodes. The divergence-form coefficient
/// fields a_ij, b_i are carried alongside as a cross-check only; the matrix is
/// assembled from the non-divergence form above.
struct OperatorAssembly {
    Eigen::SparseMatrix<double> matrix;  // row-major node ordering, x-major
    Field2D a11, a12, a21, a22;          // a11 = eps^2, a12 = a21 = -eps^2 S/g,
                                         // a22 = (1 + eps^2 S^2)/g^2
    Field2D b1, b2;                      // b1 = -eps^2 (u_x - v_x)/g,
                                         // b2 =  eps^2 (u_x - v_x) S/g^2
};

/// Throws SingularGeometryError when the gap is below gap_floor.
OperatorAssembly assemble_operator(const MembraneState& s, const Params& p,
                                   const Grid2D& g2, double gap_floor = 1e-3);

/// Right-hand side f = L z' on every node of the grid (boundary rows of the
/// solve ignore it). Carries the global eps^2 factor, so f = 0 when eps = 0.
Field2D assemble_rhs(const MembraneState& s, const Params& p, const Grid2D& g2,
                     double gap_floor = 1e-3);

/// psi together with phi_tilde = psi + z'. phi_tilde equals z' on the whole
/// boundary and obeys 0 <= phi_tilde <= 1 up to the discrete-max-principle
/// tolerance of 1e-6.
struct PotentialField {
    Field2D psi;
    Field2D phi_tilde;
    double residual = 0.0;  // relative residual of the linear solve
};

struct EllipticOptions {
    double gap_floor = 1e-3;
    double rel_tol = 1e-10;        // accepted relative residual
    int direct_max_unknowns = 100000;  // above this switch to BiCGSTAB + ILUT
};

/// Assembles and solves -L psi = f. Direct sparse factorization at desk
/// sizes, preconditioned BiCGSTAB beyond direct_max_unknowns. Throws
/// NumericError (carrying the residual) if rel_tol is not met.
PotentialField solve_potential(const MembraneState& s, const Params& p,
                               const Grid2D& g2,
                               const EllipticOptions& opt = {});

/// Solves a.matrix * x = rhs with the identity boundary rows forced to zero
/// (homogeneous Dirichlet). Used by solve_potential and by manufactured
/// right-hand sides. achieved_rel, when given, receives the relative residual.
Field2D solve_operator_system(const OperatorAssembly& a, const Field2D& rhs,
                              const EllipticOptions& opt = {},
                              double* achieved_rel = nullptr);

enum class Edge { lower, upper };  // z' = 0 and z' = 1

/// One-sided second-order trace of d(phi_tilde)/dz' at an edge, one value per
/// x-node. Computed as 1 + one-sided difference of psi, which is exact for
/// the rest state. Throws StructuralError when N_z < 3.
std::vector<double> boundary_z_derivative(const PotentialField& phi, Edge edge);

/// Electrostatic loads on the membranes,
///   g1 = (1 + eps^2 u_x^2)/g^2 * |d_z' phi_tilde(.,1)|^2,
///   g2 = (1 + eps^2 v_x^2)/g^2 * |d_z' phi_tilde(.,0)|^2.
/// Both components are pointwise nonnegative and equal (1,1) at the rest
/// state.
struct TraceLoad {
    std::vector<double> g1, g2;
};

TraceLoad membrane_loads(const MembraneState& s, const PotentialField& phi,
                         const Params& p);

/// Coordinate-format dump (row col value per line) of the assembled matrix.
void dump_matrix_coo(const Eigen::SparseMatrix<double>& m, const std::string& path);

namespace serial_ref {

/// Reference single-thread assembly kept for testing the OpenMP kernels;
/// identical arithmetic per row, so results must match bitwise.
OperatorAssembly assemble_operator(const MembraneState& s, const Params& p,
                                   const Grid2D& g2, double gap_floor = 1e-3);
Field2D assemble_rhs(const MembraneState& s, const Params& p, const Grid2D& g2,
                     double gap_floor = 1e-3);

} // namespace serial_ref

} // namespace memsfbp
