#include "memsfbp/steady.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "memsfbp/numerics.hpp"
#include "memsfbp/parallel.hpp"

namespace memsfbp {

double ResidualPair::max_norm() const {
    return std::max(max_abs(ru), max_abs(rv));
}

namespace {

// Loads g at a state (one elliptic solve).
TraceLoad loads_at(const MembraneState& s, const Params& p, const Grid2D& g2,
                   double gap_floor) {
    EllipticOptions opt;
    opt.gap_floor = gap_floor;
    const PotentialField phi = solve_potential(s, p, g2, opt);
    return membrane_loads(s, phi, p);
}

ResidualPair residual_from_loads(const MembraneState& s, const Params& p,
                                 const TraceLoad& load) {
    const int n = s.grid.n;
    const double h2 = s.grid.h * s.grid.h;
    ResidualPair r;
    r.ru.resize(static_cast<std::size_t>(n) - 1);
    r.rv.resize(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const double d2u = (s.u[si + 1] - 2.0 * s.u[si] + s.u[si - 1]) / h2;
        const double d2v = (s.v[si + 1] - 2.0 * s.v[si] + s.v[si - 1]) / h2;
        r.ru[si - 1] = -d2u + p.lambda * load.g1[si];
        r.rv[si - 1] = -d2v - p.mu * load.g2[si];
    }
    return r;
}

// Directional derivatives of the load map by forward differences; every
// column is an independent elliptic solve, so columns run in parallel.
// Returns the dense A + B_Lambda with A the exact block second-difference
// operator.
Eigen::MatrixXd linearization_matrix(const MembraneState& s, const Params& p,
                                     const Grid2D& g2, double fd_scale,
                                     double gap_floor, const TraceLoad& base_load) {
    const int n = s.grid.n;
    const int m = n - 1;
    const double h2 = s.grid.h * s.grid.h;
    const double delta = fd_scale * s.min_gap();

    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int k = 0; k < m; ++k) {
        jac(k, k) += 2.0 / h2;
        jac(m + k, m + k) += 2.0 / h2;
        if (k > 0) {
            jac(k, k - 1) -= 1.0 / h2;
            jac(m + k, m + k - 1) -= 1.0 / h2;
        }
        if (k < m - 1) {
            jac(k, k + 1) -= 1.0 / h2;
            jac(m + k, m + k + 1) -= 1.0 / h2;
        }
    }

    if (p.lambda == 0.0 && p.mu == 0.0) {
        return jac;  // B_Lambda vanishes with the parameters
    }

    parallel_for(2 * m, [&](std::int64_t col) {
        MembraneState pert = s;
        if (col < m) {
            pert.u[static_cast<std::size_t>(col) + 1] += delta;
        } else {
            pert.v[static_cast<std::size_t>(col - m) + 1] += delta;
        }
        const TraceLoad load = loads_at(pert, p, g2, gap_floor);
        for (int i = 1; i < n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            const double dg1 = (load.g1[si] - base_load.g1[si]) / delta;
            const double dg2 = (load.g2[si] - base_load.g2[si]) / delta;
            jac(i - 1, col) += p.lambda * dg1;
            jac(m + i - 1, col) += -p.mu * dg2;
        }
    });
    return jac;
}

bool admissible_for_newton(const MembraneState& s, double gap_floor) {
    if (s.min_gap() < gap_floor) return false;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        if (!std::isfinite(s.u[i]) || !std::isfinite(s.v[i])) return false;
        if (s.u[i] > 0.0 || s.v[i] < -1.0) return false;
    }
    return true;
}

} // namespace

ResidualPair steady_residual(const MembraneState& s, const Params& p,
                             const Grid2D& g2) {
    p.validate();
    return residual_from_loads(s, p, loads_at(s, p, g2, 1e-3));
}

SteadyResult steady_newton(const Params& p, const MembraneState& init,
                           const Grid2D& g2, const SteadyOptions& opt) {
    p.validate();
    const int n = init.grid.n;
    const int m = n - 1;

    SteadyResult res;
    res.point.lambda = p.lambda;
    res.point.mu = p.mu;
    res.point.state = init;

    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        TraceLoad load;
        try {
            load = loads_at(res.point.state, p, g2, opt.gap_floor);
        } catch (const SingularGeometryError&) {
            return res;
        }
        const ResidualPair r = residual_from_loads(res.point.state, p, load);
        const double rnorm = r.max_norm();
        res.point.newton_iters = iter;
        res.residual = rnorm;
        res.residual_history.push_back(rnorm);
        if (rnorm <= opt.tol) {
            res.converged = true;
            break;
        }
        if (iter == opt.max_iterations) {
            return res;  // no steady state found from this guess
        }

        const Eigen::MatrixXd jac =
            linearization_matrix(res.point.state, p, g2, opt.fd_scale, opt.gap_floor, load);
        Eigen::VectorXd rhs(2 * m);
        for (int k = 0; k < m; ++k) {
            rhs[k] = -r.ru[static_cast<std::size_t>(k)];
            rhs[m + k] = -r.rv[static_cast<std::size_t>(k)];
        }
        const Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);

        double damp = 1.0;
        bool accepted = false;
        for (int half = 0; half < 10 && !accepted; ++half, damp *= 0.5) {
            MembraneState trial = res.point.state;
            for (int k = 0; k < m; ++k) {
                trial.u[static_cast<std::size_t>(k + 1)] += damp * delta[k];
                trial.v[static_cast<std::size_t>(k + 1)] += damp * delta[m + k];
            }
            if (!admissible_for_newton(trial, opt.gap_floor)) continue;
            TraceLoad tl;
            try {
                tl = loads_at(trial, p, g2, opt.gap_floor);
            } catch (const SingularGeometryError&) {
                continue;
            }
            if (residual_from_loads(trial, p, tl).max_norm() < rnorm) {
                res.point.state = trial;
                accepted = true;
            }
        }
        if (!accepted) {
            return res;
        }
    }

    if (res.converged && opt.compute_spectrum) {
        res.point.spectral_bound =
            linearization_spectrum(res.point.state, p, g2, opt.fd_scale);
    }
    return res;
}

Eigen::MatrixXd assemble_linearization(const MembraneState& s, const Params& p,
                                       const Grid2D& g2, double fd_scale) {
    const TraceLoad load = loads_at(s, p, g2, 1e-3);
    return linearization_matrix(s, p, g2, fd_scale, 1e-3, load);
}

double linearization_spectrum(const MembraneState& s, const Params& p,
                              const Grid2D& g2, double fd_scale) {
    const Eigen::MatrixXd gen = assemble_linearization(s, p, g2, fd_scale);
    Eigen::EigenSolver<Eigen::MatrixXd> es(gen, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw NumericError("linearization_spectrum: eigensolver failed", -1.0);
    }
    // Stability convention: the evolution is V_t + (A + B_Lambda) V = h.o.t.,
    // so the generator is -(A + B_Lambda) and its spectral bound is
    // -min Re spec(A + B_Lambda).
    double min_re = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        min_re = std::min(min_re, es.eigenvalues()[k].real());
    }
    return -min_re;
}

namespace {

struct ArclengthTangent {
    Eigen::VectorXd dir_state;  // d(u,v)/ds on interior nodes
    double dir_lambda = 1.0;
};

Eigen::VectorXd pack_interior(const MembraneState& s) {
    const int m = s.grid.n - 1;
    Eigen::VectorXd x(2 * m);
    for (int k = 0; k < m; ++k) {
        x[k] = s.u[static_cast<std::size_t>(k + 1)];
        x[m + k] = s.v[static_cast<std::size_t>(k + 1)];
    }
    return x;
}

void unpack_interior(const Eigen::VectorXd& x, MembraneState& s) {
    const int m = s.grid.n - 1;
    for (int k = 0; k < m; ++k) {
        s.u[static_cast<std::size_t>(k + 1)] = x[k];
        s.v[static_cast<std::size_t>(k + 1)] = x[m + k];
    }
}

} // namespace

SteadyBranch trace_branch(double direction, const Params& p0, const Grid2D& g2,
                          const ContinuationControls& controls) {
    if (direction < 0.0) throw ValidationError("trace_branch: ray ratio must be >= 0");
    SteadyBranch branch;
    branch.direction = direction;

    const Grid1D& g1 = g2.gx;
    Params p = p0;
    p.lambda = 0.0;
    p.mu = 0.0;

    SteadyOptions nopt = controls.newton;
    nopt.compute_spectrum = false;

    // The branch emanates from Lambda = (0,0) at the rest state.
    BranchPoint origin;
    origin.lambda = 0.0;
    origin.mu = 0.0;
    origin.state = MembraneState(g1);
    origin.newton_iters = 1;
    if (controls.compute_spectrum) {
        origin.spectral_bound = linearization_spectrum(origin.state, p, g2, nopt.fd_scale);
    }
    branch.points.push_back(origin);

    auto push_point = [&](const SteadyResult& res) {
        BranchPoint bp = res.point;
        if (controls.compute_spectrum) {
            Params pp = p0;
            pp.lambda = bp.lambda;
            pp.mu = bp.mu;
            bp.spectral_bound = linearization_spectrum(bp.state, pp, g2, nopt.fd_scale);
        }
        branch.points.push_back(bp);
    };

    // Phase 1: natural continuation in lambda.
    double step = controls.lambda_step;
    bool switch_to_arclength = false;
    while (static_cast<int>(branch.points.size()) < controls.max_points) {
        const BranchPoint& last = branch.points.back();
        if (last.lambda >= controls.max_lambda) {
            branch.termination = "max_lambda";
            return branch;
        }
        p.lambda = last.lambda + step;
        p.mu = direction * p.lambda;
        const SteadyResult res = steady_newton(p, last.state, g2, nopt);
        if (res.converged) {
            push_point(res);
        } else {
            step *= 0.5;
            if (step < std::max(controls.min_step, controls.lambda_step / 16.0)) {
                switch_to_arclength = true;
                break;
            }
        }
    }
    if (!switch_to_arclength) {
        branch.termination = "max_points";
        return branch;
    }
    if (branch.points.size() < 2) {
        branch.termination = "step_underflow";
        return branch;
    }

    // Phase 2: pseudo-arclength around the fold. Unknowns (U, lambda) with
    // mu = direction * lambda; the constraint keeps steps at arclength ds
    // along the secant tangent.
    const int m = g1.n - 1;
    double ds = controls.arclength_step;
    int points_after_fold = 0;
    double prev_dlambda = step;

    ArclengthTangent tang;
    {
        const BranchPoint& a = branch.points[branch.points.size() - 2];
        const BranchPoint& b = branch.points.back();
        tang.dir_state = pack_interior(b.state) - pack_interior(a.state);
        tang.dir_lambda = b.lambda - a.lambda;
        const double norm = std::sqrt(tang.dir_state.squaredNorm() +
                                      tang.dir_lambda * tang.dir_lambda);
        tang.dir_state /= norm;
        tang.dir_lambda /= norm;
    }

    while (static_cast<int>(branch.points.size()) < controls.max_points) {
        const BranchPoint& last = branch.points.back();
        const Eigen::VectorXd x0 = pack_interior(last.state);
        const double l0 = last.lambda;

        // Predictor.
        MembraneState state = last.state;
        unpack_interior(x0 + ds * tang.dir_state, state);
        double lambda = l0 + ds * tang.dir_lambda;

        bool converged = false;
        int iters = 0;
        for (int it = 1; it <= nopt.max_iterations; ++it) {
            iters = it;
            if (lambda < 0.0 || !admissible_for_newton(state, nopt.gap_floor)) break;
            Params pc = p0;
            pc.lambda = lambda;
            pc.mu = direction * lambda;
            TraceLoad load;
            try {
                load = loads_at(state, pc, g2, nopt.gap_floor);
            } catch (const SingularGeometryError&) {
                break;
            }
            const ResidualPair r = residual_from_loads(state, pc, load);
            const Eigen::VectorXd x = pack_interior(state);
            const double constraint = tang.dir_state.dot(x - x0) +
                                      tang.dir_lambda * (lambda - l0) - ds;
            if (std::max(r.max_norm(), std::abs(constraint)) <= nopt.tol) {
                converged = true;
                break;
            }

            const Eigen::MatrixXd jac =
                linearization_matrix(state, pc, g2, nopt.fd_scale, nopt.gap_floor, load);
            // d(residual)/d(lambda) is analytic: the load map itself does not
            // depend on lambda.
            Eigen::MatrixXd big = Eigen::MatrixXd::Zero(2 * m + 1, 2 * m + 1);
            big.topLeftCorner(2 * m, 2 * m) = jac;
            Eigen::VectorXd rhs(2 * m + 1);
            for (int k = 0; k < m; ++k) {
                big(k, 2 * m) = load.g1[static_cast<std::size_t>(k + 1)];
                big(m + k, 2 * m) = -direction * load.g2[static_cast<std::size_t>(k + 1)];
                rhs[k] = -r.ru[static_cast<std::size_t>(k)];
                rhs[m + k] = -r.rv[static_cast<std::size_t>(k)];
            }
            big.row(2 * m).head(2 * m) = tang.dir_state.transpose();
            big(2 * m, 2 * m) = tang.dir_lambda;
            rhs[2 * m] = -constraint;

            const Eigen::VectorXd delta = big.partialPivLu().solve(rhs);
            unpack_interior(x + delta.head(2 * m), state);
            lambda += delta[2 * m];
        }

        if (!converged) {
            ds *= 0.5;
            if (ds < controls.min_step) {
                branch.termination = "step_underflow";
                return branch;
            }
            continue;
        }

        SteadyResult res;
        res.converged = true;
        res.point.lambda = lambda;
        res.point.mu = direction * lambda;
        res.point.state = state;
        res.point.newton_iters = iters;
        const double dlambda = lambda - l0;
        if (prev_dlambda > 0.0 && dlambda < 0.0 && !branch.fold_found) {
            branch.fold_found = true;
            branch.fold_lambda = l0;  // the turning point is the last max-lambda point
            branch.points.back().fold_flag = true;
        }
        prev_dlambda = dlambda;
        push_point(res);

        // Refresh the tangent from the new secant.
        const BranchPoint& a = branch.points[branch.points.size() - 2];
        const BranchPoint& b = branch.points.back();
        tang.dir_state = pack_interior(b.state) - pack_interior(a.state);
        tang.dir_lambda = b.lambda - a.lambda;
        const double norm =
            std::sqrt(tang.dir_state.squaredNorm() + tang.dir_lambda * tang.dir_lambda);
        tang.dir_state /= norm;
        tang.dir_lambda /= norm;

        if (branch.fold_found && ++points_after_fold >= controls.points_past_fold) {
            branch.termination = "fold";
            return branch;
        }
    }
    branch.termination = "max_points";
    return branch;
}

double m2_threshold(double eps) {
    if (eps < 0.0) throw ValidationError("m2_threshold: eps must be >= 0");
    const double pi2 = M_PI * M_PI;
    return pi2 * pi2 * (1.0 + eps * eps) * (1.0 + eps * eps);
}

double xi0(double eps) {
    if (!(eps > 0.0)) throw ValidationError("xi0: eps must be > 0");
    const double hi_limit = 0.5 * M_PI / eps;
    auto Lambda = [&](double xi) {
        return 1.0 + std::log(std::cos(eps * xi)) / (eps * eps * xi);
    };
    double lo = 1e-8 * hi_limit;
    double hi = (1.0 - 1e-12) * hi_limit;
    // Lambda decreases from ~1 to -inf on (0, pi/(2 eps)); bisect its sign
    // change to relative tolerance 1e-10.
    while ((hi - lo) > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (Lambda(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace memsfbp
