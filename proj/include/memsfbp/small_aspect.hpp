#pragma once

#include "memsfbp/dynamics.hpp"
#include "memsfbp/params.hpp"
#include "memsfbp/state.hpp"

namespace memsfbp {

// Narrow-gap (eps = 0) model: the potential is affine in z across the gap and
// the membranes obey reaction-diffusion equations with the singular loads
// -lambda/(u-v)^2 and +mu/(u-v)^2.

/// States of the narrow-gap model share the full model's invariants.
using SarState = MembraneState;

/// phi(x, z) = (z - v(x))/(u(x) - v(x)); exact, no discretization in z.
/// Throws DomainError for z outside [v(x), u(x)].
double sar_potential(const SarState& s, double x, double z);

/// IMEX backward-Euler step with the explicit reaction +-(lambda,mu)/(u-v)^2.
SarState sar_step(const SarState& s, const Params& p, double dt);

/// Evolution loop with the same verdicts and record layout as the full model
/// (record.model == "sar").
SimRecord sar_run_evolution(const SarState& s0, const Params& p,
                            const TimeControls& tc, const GapParams& g);

struct SarNewtonResult {
    SarState state;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
};

struct SarNewtonOptions {
    double tol = 1e-10;        // residual max-norm
    int max_iterations = 50;
    double min_gap = 1e-6;     // reject iterates that pinch the gap below this
};

/// Newton iteration on the steady system u_xx = lambda/(u-v)^2,
/// v_xx = -mu/(u-v)^2 with the analytic Jacobian (tridiagonal diffusion
/// blocks plus diagonal coupling, d/du of lambda (u-v)^-2 = -2 lambda (u-v)^-3
/// and so on). Non-convergence signals likely non-existence (beyond the fold).
SarNewtonResult sar_steady_solve(const Params& p, const Grid1D& g1,
                                 const SarState& init,
                                 const SarNewtonOptions& opt = {});

struct FoldSearchOptions {
    double lambda_step = 0.01;
    double min_step = 1e-6;
    double lambda_max = 10.0;
};

/// Natural continuation in lambda along the ray mu = ratio * lambda, halving
/// the step on Newton failure. Returns the largest lambda with a converged
/// steady state; the fold lies within min_step of it.
double sar_fold_search(double ratio, const Grid1D& g1,
                       const FoldSearchOptions& opt = {});

} // namespace memsfbp
