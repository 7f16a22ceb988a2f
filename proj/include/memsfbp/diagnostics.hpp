#pragma once

#include <string>
#include <vector>

#include "memsfbp/dynamics.hpp"
#include "memsfbp/elliptic.hpp"
#include "memsfbp/state.hpp"

namespace memsfbp {

/// Weights of the Lyapunov functional E_alpha(t) = int zeta1 (u + alpha/2 u^2) dx:
/// zeta1 = (pi/4) cos(pi x / 2) is the unit-L1-mass principal Dirichlet
/// eigenfunction on I, mu1 = pi^2/4 its eigenvalue.
struct LyapunovParams {
    double alpha = 0.0;    // eps^2 / (1 + eps^2)
    double beta = 0.0;     // sqrt(lambda) / 2
    double p_exp = 1.0;    // 1 + 2 mu1 eps^2
    double mu1 = 0.0;      // pi^2 / 4
    Grid1D grid;
    std::vector<double> zeta1;

    LyapunovParams() = default;
    LyapunovParams(double eps, double lambda, const Grid1D& g);
};

/// Trapezoid quadrature of zeta1 (u + alpha/2 u^2).
double lyapunov_E(const MembraneState& s, const LyapunovParams& lp);

/// One named verification result. Negative controls are checks that are
/// expected to fail; they do not gate the verify exit code.
struct CheckReport {
    std::string name;
    bool passed = false;
    double worst_value = 0.0;
    double tolerance = 0.0;
    std::string location;  // node / time index of the worst value
    bool negative_control = false;
};

/// passed iff -1e-6 <= phi_tilde <= 1 + 1e-6 at every node (sharper than the
/// continuous bound -1 <= phi <= 1).
CheckReport max_principle_check(const PotentialField& phi);

/// Reconstructs the physical derivatives of phi on a membrane from
/// reference-domain differences (d_z phi from the edge trace over the gap,
/// d_x phi by differencing at fixed physical height via linear interpolation
/// in z') and checks the tangential identity d_x phi + slope * d_z phi = 0 to
/// C*h in the max norm. C is calibrated once against the manufactured
/// solution; see chain_rule_tolerance().
CheckReport chain_rule_check(const MembraneState& s, const PotentialField& phi,
                             Edge edge);

double chain_rule_tolerance(double hx);

/// Raw residual samples behind chain_rule_check, for order studies.
std::vector<double> chain_rule_residual(const MembraneState& s,
                                        const PotentialField& phi, Edge edge);

/// Scaled Sobolev seminorms of psi on Omega: the five interior quantities
///   ||psi_x||, ||psi||/eps, ||psi_z||/eps, ||psi_xz||/eps, ||psi_zz||/eps^2
/// (discrete L2, trapezoid weights) plus two trace surrogates of the
/// W^{1/2}(I) bound: the L2 edge-trace norm of psi_z / eps and the
/// first-difference Gagliardo seminorm of the same traces / eps.
struct EnergyNorms {
    double dx_psi = 0.0;
    double psi_over_eps = 0.0;
    double dz_psi_over_eps = 0.0;
    double dxdz_psi_over_eps = 0.0;
    double dzz_psi_over_eps2 = 0.0;
    double trace_l2_over_eps = 0.0;
    double trace_gagliardo_over_eps = 0.0;
};

EnergyNorms energy_norms(const PotentialField& phi, const Params& p);

/// Evenness of every snapshot under node reflection, tolerance 1e-10.
std::vector<CheckReport> symmetry_checks(const SimRecord& record);

/// Snapshot-wise residual between run B and the swap image of run A, where B
/// was started from swapped data with exchanged parameters. Tolerance 1e-6.
CheckReport swap_equivariance_check(const SimRecord& a, const SimRecord& b);

} // namespace memsfbp
