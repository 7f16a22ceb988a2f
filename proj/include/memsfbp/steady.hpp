#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "memsfbp/elliptic.hpp"
#include "memsfbp/params.hpp"
#include "memsfbp/state.hpp"

namespace memsfbp {

// Steady states of the full model, located as zeros of the residual
//   r = ( -u_xx + lambda g1(u,v),  -v_xx - mu g2(u,v) )
// on the interior nodes, with parameter continuation along rays mu/lambda =
// const and linearized stability from the discrete generator A + B_Lambda.

/// Residual pair on the interior nodes (n-1 entries each).
struct ResidualPair {
    std::vector<double> ru, rv;
    double max_norm() const;
};

ResidualPair steady_residual(const MembraneState& s, const Params& p,
                             const Grid2D& g2);

struct BranchPoint {
    double lambda = 0.0;
    double mu = 0.0;
    MembraneState state;
    double spectral_bound = 0.0;  // max Re spec(-(A + B_Lambda)); < 0 means stable
    int newton_iters = 0;
    bool fold_flag = false;
};

struct SteadyOptions {
    double tol = 1e-9;            // residual max-norm
    int max_iterations = 50;
    double fd_scale = 1e-6;       // Jacobian column perturbation, times the gap scale
    double gap_floor = 1e-3;
    bool compute_spectrum = true;
};

struct SteadyResult {
    BranchPoint point;
    bool converged = false;
    double residual = 0.0;
    std::vector<double> residual_history;  // max-norm per Newton iteration
};

/// Damped Newton with a finite-difference Jacobian; every column costs one
/// elliptic solve, columns run in parallel. Non-convergence within
/// max_iterations signals that no steady state was found from this guess.
SteadyResult steady_newton(const Params& p, const MembraneState& init,
                           const Grid2D& g2, const SteadyOptions& opt = {});

/// Discrete linearization A + B_Lambda at the given state: A is the
/// block-diagonal Dirichlet second-difference operator and B_Lambda =
/// diag(lambda, -mu) Dg, with Dg by finite-difference directional
/// derivatives of the load map. Matrix order 2(N_x - 1).
Eigen::MatrixXd assemble_linearization(const MembraneState& s, const Params& p,
                                       const Grid2D& g2, double fd_scale = 1e-6);

/// Spectral bound of the negated generator -(A + B_Lambda): the steady state
/// is asymptotically stable iff the bound is negative. Dense eigensolve;
/// throws NumericError on eigensolver failure.
double linearization_spectrum(const MembraneState& s, const Params& p,
                              const Grid2D& g2, double fd_scale = 1e-6);

struct ContinuationControls {
    double lambda_step = 0.01;     // natural-continuation step
    double min_step = 1e-6;
    double max_lambda = 10.0;
    double arclength_step = 0.02;  // pseudo-arclength step after switching
    int max_points = 400;
    int points_past_fold = 5;
    bool compute_spectrum = true;
    SteadyOptions newton;
};

struct SteadyBranch {
    std::vector<BranchPoint> points;
    double direction = 1.0;   // ray ratio mu / lambda
    bool fold_found = false;
    double fold_lambda = -1.0;
    std::string termination;  // "fold", "max_lambda", "step_underflow", "max_points"
};

/// Traces the branch emanating from Lambda = (0,0) along mu = direction *
/// lambda: natural continuation while Newton converges, pseudo-arclength to
/// round the fold, fold flagged where the lambda-step changes sign.
SteadyBranch trace_branch(double direction, const Params& p0, const Grid2D& g2,
                          const ContinuationControls& controls = {});

/// Non-existence threshold m2 = pi^4 (1 + eps^2)^2: beyond it in either
/// parameter the evolution cannot be global.
double m2_threshold(double eps);

/// Unique zero of Lambda_eps(xi) = 1 + ln(cos(eps xi))/(eps^2 xi) on
/// (0, pi/(2 eps)), located by bisection to relative tolerance 1e-10.
/// Even steady states cannot exist with max(lambda, mu) beyond it;
/// xi0(eps) -> 2 as eps -> 0.
double xi0(double eps);

} // namespace memsfbp
