#include "memsfbp/elliptic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "memsfbp/numerics.hpp"
#include "memsfbp/parallel.hpp"

namespace memsfbp {

MembraneDerivs membrane_derivs(const MembraneState& s) {
    MembraneDerivs d;
    d.ux = derivative1(s.u, s.grid.h);
    d.vx = derivative1(s.v, s.grid.h);
    d.uxx = derivative2(s.u, s.grid.h);
    d.vxx = derivative2(s.v, s.grid.h);
    d.gap.resize(s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        d.gap[i] = s.u[i] - s.v[i];
    }
    return d;
}

namespace {

void require_geometry(const MembraneState& s, const Grid2D& g2, double gap_floor) {
    if (s.grid.n != g2.gx.n) {
        throw StructuralError("elliptic: state and Grid2D use different x grids");
    }
    if (s.min_gap() < gap_floor) {
        throw SingularGeometryError("elliptic: membrane gap below the touchdown threshold");
    }
}

struct NodeCoeffs {
    double cxx, cxz, czz, cz;  // operator L = cxx dxx + cxz dxz + czz dzz + cz dz
};

inline NodeCoeffs coeffs_at(const MembraneDerivs& d, double eps2, int i, double z) {
    const std::size_t si = static_cast<std::size_t>(i);
    const double dslope = d.ux[si] - d.vx[si];
    const double S = z * dslope + d.vx[si];
    const double g = d.gap[si];
    NodeCoeffs c;
    c.cxx = eps2;
    c.cxz = -2.0 * eps2 * S / g;
    c.czz = (1.0 + eps2 * S * S) / (g * g);
    c.cz = eps2 * (2.0 * dslope * S / (g * g) - (z * (d.uxx[si] - d.vxx[si]) + d.vxx[si]) / g);
    return c;
}

inline double rhs_at(const MembraneDerivs& d, double eps2, int i, double z) {
    // f = L z' : the z'-advection coefficient evaluated with w = z'.
    const std::size_t si = static_cast<std::size_t>(i);
    const double dslope = d.ux[si] - d.vx[si];
    const double S = z * dslope + d.vx[si];
    const double g = d.gap[si];
    return eps2 * (2.0 * dslope * S / (g * g) - (z * (d.uxx[si] - d.vxx[si]) + d.vxx[si]) / g);
}

// Each node owns 9 triplet slots; the 4-point cross stencil for the mixed
// term makes interior rows 9-entry rows. Boundary rows repeat their identity
// entry, which setFromTriplets collapses.
void fill_row(std::vector<Eigen::Triplet<double>>& trips, const Grid2D& g2,
              const MembraneDerivs& d, double eps2, int i, int j) {
    const int nz = g2.nz;
    const int row = g2.idx(i, j);
    const std::size_t base = static_cast<std::size_t>(row) * 9;
    const bool boundary = (i == 0 || i == g2.gx.n || j == 0 || j == nz);
    if (boundary) {
        for (int k = 0; k < 9; ++k) {
            trips[base + static_cast<std::size_t>(k)] =
                Eigen::Triplet<double>(row, row, k == 0 ? 1.0 : 0.0);
        }
        return;
    }
    const NodeCoeffs c = coeffs_at(d, eps2, i, g2.z(j));
    const double hx2 = g2.gx.h * g2.gx.h;
    const double hz2 = g2.hz * g2.hz;
    const double cross = c.cxz / (4.0 * g2.gx.h * g2.hz);
    const double adv = c.cz / (2.0 * g2.hz);
    int k = 0;
    auto put = [&](int ii, int jj, double val) {
        trips[base + static_cast<std::size_t>(k++)] =
            Eigen::Triplet<double>(row, g2.idx(ii, jj), val);
    };
    put(i, j, -2.0 * c.cxx / hx2 - 2.0 * c.czz / hz2);
    put(i - 1, j, c.cxx / hx2);
    put(i + 1, j, c.cxx / hx2);
    put(i, j - 1, c.czz / hz2 - adv);
    put(i, j + 1, c.czz / hz2 + adv);
    put(i + 1, j + 1, cross);
    put(i + 1, j - 1, -cross);
    put(i - 1, j + 1, -cross);
    put(i - 1, j - 1, cross);
}

void fill_coefficient_fields(OperatorAssembly& a, const Grid2D& g2,
                             const MembraneDerivs& d, double eps2) {
    parallel_for(g2.gx.num_nodes(), [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        const std::size_t si = static_cast<std::size_t>(i);
        const double dslope = d.ux[si] - d.vx[si];
        const double g = d.gap[si];
        for (int j = 0; j <= g2.nz; ++j) {
            const double z = g2.z(j);
            const double S = z * dslope + d.vx[si];
            a.a11.at(i, j) = eps2;
            a.a12.at(i, j) = -eps2 * S / g;
            a.a21.at(i, j) = a.a12.at(i, j);
            a.a22.at(i, j) = (1.0 + eps2 * S * S) / (g * g);
            a.b1.at(i, j) = -eps2 * dslope / g;
            a.b2.at(i, j) = eps2 * dslope * S / (g * g);
        }
    });
}

} // namespace

OperatorAssembly assemble_operator(const MembraneState& s, const Params& p,
                                   const Grid2D& g2, double gap_floor) {
    require_geometry(s, g2, gap_floor);
    const MembraneDerivs d = membrane_derivs(s);
    const double eps2 = p.eps * p.eps;
    const int n_nodes = g2.num_nodes();

    std::vector<Eigen::Triplet<double>> trips(static_cast<std::size_t>(n_nodes) * 9);
    parallel_for(g2.gx.num_nodes(), [&](std::int64_t ii) {
        for (int j = 0; j <= g2.nz; ++j) {
            fill_row(trips, g2, d, eps2, static_cast<int>(ii), j);
        }
    });

    OperatorAssembly a;
    a.matrix.resize(n_nodes, n_nodes);
    a.matrix.setFromTriplets(trips.begin(), trips.end());
    a.a11 = Field2D(g2);
    a.a12 = Field2D(g2);
    a.a21 = Field2D(g2);
    a.a22 = Field2D(g2);
    a.b1 = Field2D(g2);
    a.b2 = Field2D(g2);
    fill_coefficient_fields(a, g2, d, eps2);
    return a;
}

Field2D assemble_rhs(const MembraneState& s, const Params& p, const Grid2D& g2,
                     double gap_floor) {
    require_geometry(s, g2, gap_floor);
    const MembraneDerivs d = membrane_derivs(s);
    const double eps2 = p.eps * p.eps;
    Field2D f(g2);
    parallel_for(g2.gx.num_nodes(), [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = 0; j <= g2.nz; ++j) {
            f.at(i, j) = rhs_at(d, eps2, i, g2.z(j));
        }
    });
    return f;
}

Field2D solve_operator_system(const OperatorAssembly& a, const Field2D& rhs,
                              const EllipticOptions& opt, double* achieved_rel) {
    const Grid2D& g2 = rhs.grid;
    const int n = g2.num_nodes();
    Eigen::VectorXd b(n);
    for (int i = 0; i <= g2.gx.n; ++i) {
        for (int j = 0; j <= g2.nz; ++j) {
            const bool boundary = (i == 0 || i == g2.gx.n || j == 0 || j == g2.nz);
            b[g2.idx(i, j)] = boundary ? 0.0 : rhs.at(i, j);
        }
    }

    Eigen::VectorXd x;
    if (n <= opt.direct_max_unknowns) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a.matrix);
        if (lu.info() != Eigen::Success) {
            throw NumericError("solve_operator_system: sparse factorization failed", -1.0);
        }
        x = lu.solve(b);
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> krylov;
        krylov.setTolerance(opt.rel_tol * 1e-2);
        krylov.setMaxIterations(20000);
        krylov.compute(a.matrix);
        x = krylov.solve(b);
        if (krylov.info() != Eigen::Success) {
            throw NumericError("solve_operator_system: BiCGSTAB did not converge",
                               krylov.error());
        }
    }

    const double bnorm = b.lpNorm<Eigen::Infinity>();
    const double rnorm = (a.matrix * x - b).lpNorm<Eigen::Infinity>();
    const double rel = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    if (!(rel <= opt.rel_tol)) {
        throw NumericError("solve_operator_system: residual above tolerance", rel);
    }
    if (achieved_rel) *achieved_rel = rel;

    Field2D out(g2);
    for (int i = 0; i <= g2.gx.n; ++i) {
        for (int j = 0; j <= g2.nz; ++j) {
            out.at(i, j) = x[g2.idx(i, j)];
        }
    }
    return out;
}

PotentialField solve_potential(const MembraneState& s, const Params& p,
                               const Grid2D& g2, const EllipticOptions& opt) {
    const OperatorAssembly a = assemble_operator(s, p, g2, opt.gap_floor);
    Field2D f = assemble_rhs(s, p, g2, opt.gap_floor);
    // The shifted potential solves L psi = -f with psi = 0 on the boundary.
    for (double& val : f.values) val = -val;

    PotentialField out;
    out.psi = solve_operator_system(a, f, opt, &out.residual);
    out.phi_tilde = Field2D(g2);
    for (int i = 0; i <= g2.gx.n; ++i) {
        for (int j = 0; j <= g2.nz; ++j) {
            out.phi_tilde.at(i, j) = out.psi.at(i, j) + g2.z(j);
        }
    }
    return out;
}

std::vector<double> boundary_z_derivative(const PotentialField& phi, Edge edge) {
    const Grid2D& g2 = phi.psi.grid;
    if (g2.nz < 3) {
        throw StructuralError("boundary_z_derivative: need N_z >= 3");
    }
    const int nx = g2.gx.n;
    const int nz = g2.nz;
    std::vector<double> tr(static_cast<std::size_t>(nx) + 1);
    // d(phi_tilde)/dz' = 1 + d(psi)/dz'; one-sided 3-point differences keep
    // the rest state exact.
    for (int i = 0; i <= nx; ++i) {
        double dpsi;
        if (edge == Edge::lower) {
            dpsi = (-3.0 * phi.psi.at(i, 0) + 4.0 * phi.psi.at(i, 1) - phi.psi.at(i, 2)) /
                   (2.0 * g2.hz);
        } else {
            dpsi = (3.0 * phi.psi.at(i, nz) - 4.0 * phi.psi.at(i, nz - 1) + phi.psi.at(i, nz - 2)) /
                   (2.0 * g2.hz);
        }
        tr[static_cast<std::size_t>(i)] = 1.0 + dpsi;
    }
    return tr;
}

TraceLoad membrane_loads(const MembraneState& s, const PotentialField& phi,
                         const Params& p) {
    const MembraneDerivs d = membrane_derivs(s);
    const std::vector<double> tr_up = boundary_z_derivative(phi, Edge::upper);
    const std::vector<double> tr_lo = boundary_z_derivative(phi, Edge::lower);
    const double eps2 = p.eps * p.eps;
    TraceLoad load;
    load.g1.resize(tr_up.size());
    load.g2.resize(tr_lo.size());
    for (std::size_t i = 0; i < tr_up.size(); ++i) {
        const double g = d.gap[i];
        load.g1[i] = (1.0 + eps2 * d.ux[i] * d.ux[i]) / (g * g) * tr_up[i] * tr_up[i];
        load.g2[i] = (1.0 + eps2 * d.vx[i] * d.vx[i]) / (g * g) * tr_lo[i] * tr_lo[i];
    }
    return load;
}

void dump_matrix_coo(const Eigen::SparseMatrix<double>& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("dump_matrix_coo: cannot open " + path);
    char buf[64];
    for (int k = 0; k < m.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
            std::snprintf(buf, sizeof buf, "%ld %ld %.16e\n", static_cast<long>(it.row()),
                          static_cast<long>(it.col()), it.value());
            out << buf;
        }
    }
}

namespace serial_ref {

OperatorAssembly assemble_operator(const MembraneState& s, const Params& p,
                                   const Grid2D& g2, double gap_floor) {
    require_geometry(s, g2, gap_floor);
    const MembraneDerivs d = membrane_derivs(s);
    const double eps2 = p.eps * p.eps;
    const int n_nodes = g2.num_nodes();

    std::vector<Eigen::Triplet<double>> trips(static_cast<std::size_t>(n_nodes) * 9);
    for (int i = 0; i <= g2.gx.n; ++i) {
        for (int j = 0; j <= g2.nz; ++j) {
            fill_row(trips, g2, d, eps2, i, j);
        }
    }

    OperatorAssembly a;
    a.matrix.resize(n_nodes, n_nodes);
    a.matrix.setFromTriplets(trips.begin(), trips.end());
    a.a11 = Field2D(g2);
    a.a12 = Field2D(g2);
    a.a21 = Field2D(g2);
    a.a22 = Field2D(g2);
    a.b1 = Field2D(g2);
    a.b2 = Field2D(g2);
    for (int i = 0; i <= g2.gx.n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const double dslope = d.ux[si] - d.vx[si];
        const double g = d.gap[si];
        for (int j = 0; j <= g2.nz; ++j) {
            const double z = g2.z(j);
            const double S = z * dslope + d.vx[si];
            a.a11.at(i, j) = eps2;
            a.a12.at(i, j) = -eps2 * S / g;
            a.a21.at(i, j) = a.a12.at(i, j);
            a.a22.at(i, j) = (1.0 + eps2 * S * S) / (g * g);
            a.b1.at(i, j) = -eps2 * dslope / g;
            a.b2.at(i, j) = eps2 * dslope * S / (g * g);
        }
    }
    return a;
}

Field2D assemble_rhs(const MembraneState& s, const Params& p, const Grid2D& g2,
                     double gap_floor) {
    require_geometry(s, g2, gap_floor);
    const MembraneDerivs d = membrane_derivs(s);
    const double eps2 = p.eps * p.eps;
    Field2D f(g2);
    for (int i = 0; i <= g2.gx.n; ++i) {
        for (int j = 0; j <= g2.nz; ++j) {
            f.at(i, j) = rhs_at(d, eps2, i, g2.z(j));
        }
    }
    return f;
}

} // namespace serial_ref

} // namespace memsfbp
