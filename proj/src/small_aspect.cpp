#include "memsfbp/small_aspect.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

#include "memsfbp/diagnostics.hpp"
#include "memsfbp/numerics.hpp"

namespace memsfbp {

double sar_potential(const SarState& s, double x, double z) {
    const double uu = s.interp_u(x);
    const double vv = s.interp_v(x);
    if (z < vv - 1e-12 || z > uu + 1e-12) {
        throw DomainError("sar_potential: z outside [v(x), u(x)]");
    }
    return (z - vv) / (uu - vv);
}

namespace {

std::vector<double> reaction(const SarState& s) {
    std::vector<double> r(s.u.size());
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        const double g = s.u[i] - s.v[i];
        r[i] = 1.0 / (g * g);
    }
    return r;
}

SarState apply_sar_imex(const SarState& s, const std::vector<double>& r,
                        const Params& p, double dt) {
    const int n = s.grid.n;
    std::vector<double> rhs_u(static_cast<std::size_t>(n) - 1);
    std::vector<double> rhs_vhat(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        rhs_u[si - 1] = s.u[si] - dt * p.lambda * r[si];
        rhs_vhat[si - 1] = (s.v[si] + 1.0) + dt * p.mu * r[si];
    }
    const std::vector<double> u_new = solve_shifted_dirichlet_laplacian(rhs_u, dt, s.grid.h);
    const std::vector<double> vhat_new = solve_shifted_dirichlet_laplacian(rhs_vhat, dt, s.grid.h);
    SarState next(s.grid);
    next.t = s.t + dt;
    for (int i = 1; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        next.u[si] = u_new[si - 1];
        next.v[si] = vhat_new[si - 1] - 1.0;
    }
    return next;
}

bool all_finite(const SarState& s) {
    for (double x : s.u) {
        if (!std::isfinite(x)) return false;
    }
    for (double x : s.v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace

SarState sar_step(const SarState& s, const Params& p, double dt) {
    p.validate(/*allow_zero_eps=*/true);
    if (s.min_gap() < 1e-3) {
        throw SingularGeometryError("sar_step: membrane gap below the touchdown threshold");
    }
    return apply_sar_imex(s, reaction(s), p, dt);
}

SimRecord sar_run_evolution(const SarState& s0, const Params& p,
                            const TimeControls& tc, const GapParams& g) {
    p.validate(/*allow_zero_eps=*/true);
    tc.validate();
    if (validate_state(s0, g) != StateClass::admissible) {
        throw ValidationError("sar_run_evolution: initial state is not admissible");
    }

    SimRecord rec;
    rec.model = "sar";
    const LyapunovParams lp(p.eps, p.lambda, s0.grid);

    auto record = [&](const SarState& s, const std::vector<double>& r) {
        rec.snapshots.push_back(s);
        rec.times.push_back(s.t);
        rec.gap_min.push_back(s.min_gap());
        rec.e_alpha.push_back(lyapunov_E(s, lp));
        rec.max_g1.push_back(max_abs(r));
        rec.max_g2.push_back(max_abs(r));
    };

    SarState cur = s0;
    long step = 0;
    while (cur.t < tc.t_end - 0.5 * tc.dt) {
        const std::vector<double> r = reaction(cur);
        if (step % tc.record_every == 0) {
            record(cur, r);
        }
        SarState next = apply_sar_imex(cur, r, p, tc.dt);
        ++step;

        if (!all_finite(next) || next.min_gap() > 2.0) {
            rec.verdict = Verdict::diverged;
            return rec;
        }
        const double gap_now = next.min_gap();
        if (gap_now < g.touchdown_gap) {
            const double gap_prev = cur.min_gap();
            rec.verdict = Verdict::touchdown;
            rec.touchdown_time =
                cur.t + tc.dt * (gap_prev - g.touchdown_gap) / (gap_prev - gap_now);
            return rec;
        }
        cur = next;
    }
    record(cur, reaction(cur));
    rec.verdict = Verdict::reached_t_end;
    return rec;
}

SarNewtonResult sar_steady_solve(const Params& p, const Grid1D& g1,
                                 const SarState& init,
                                 const SarNewtonOptions& opt) {
    p.validate(/*allow_zero_eps=*/true);
    const int n = g1.n;
    const int m = n - 1;  // interior nodes per membrane
    const double h2 = g1.h * g1.h;

    auto residual = [&](const SarState& s, std::vector<double>& ru, std::vector<double>& rv) {
        // u_xx = lambda/(u-v)^2 and v_xx = -mu/(u-v)^2 as root problems.
        for (int i = 1; i < n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            const double g = s.u[si] - s.v[si];
            const double d2u = (s.u[si + 1] - 2.0 * s.u[si] + s.u[si - 1]) / h2;
            const double d2v = (s.v[si + 1] - 2.0 * s.v[si] + s.v[si - 1]) / h2;
            ru[si - 1] = d2u - p.lambda / (g * g);
            rv[si - 1] = d2v + p.mu / (g * g);
        }
    };

    SarNewtonResult res;
    res.state = init;
    res.state.t = init.t;

    std::vector<double> ru(static_cast<std::size_t>(m)), rv(static_cast<std::size_t>(m));
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(8 * m));

    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        residual(res.state, ru, rv);
        double rnorm = std::max(max_abs(ru), max_abs(rv));
        res.iterations = iter;
        res.residual = rnorm;
        if (rnorm <= opt.tol) {
            res.converged = true;
            return res;
        }

        // Analytic Jacobian: tridiagonal diffusion blocks plus the diagonal
        // gap coupling (+-2 lambda/(u-v)^3 and friends).
        trips.clear();
        for (int i = 1; i < n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            const int k = i - 1;
            const double g = res.state.u[si] - res.state.v[si];
            const double g3 = g * g * g;
            trips.emplace_back(k, k, -2.0 / h2 + 2.0 * p.lambda / g3);
            trips.emplace_back(k, m + k, -2.0 * p.lambda / g3);
            trips.emplace_back(m + k, m + k, -2.0 / h2 + 2.0 * p.mu / g3);
            trips.emplace_back(m + k, k, -2.0 * p.mu / g3);
            if (i > 1) {
                trips.emplace_back(k, k - 1, 1.0 / h2);
                trips.emplace_back(m + k, m + k - 1, 1.0 / h2);
            }
            if (i < n - 1) {
                trips.emplace_back(k, k + 1, 1.0 / h2);
                trips.emplace_back(m + k, m + k + 1, 1.0 / h2);
            }
        }
        Eigen::SparseMatrix<double> jac(2 * m, 2 * m);
        jac.setFromTriplets(trips.begin(), trips.end());

        Eigen::VectorXd rhs(2 * m);
        for (int k = 0; k < m; ++k) {
            rhs[k] = -ru[static_cast<std::size_t>(k)];
            rhs[m + k] = -rv[static_cast<std::size_t>(k)];
        }
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) {
            return res;  // singular Jacobian: treat as non-convergence (fold)
        }
        const Eigen::VectorXd delta = lu.solve(rhs);

        // Damped update: halve until the iterate stays clear of gap collapse
        // and the residual does not grow.
        double damp = 1.0;
        bool accepted = false;
        for (int half = 0; half < 12 && !accepted; ++half, damp *= 0.5) {
            SarState trial = res.state;
            for (int k = 0; k < m; ++k) {
                trial.u[static_cast<std::size_t>(k + 1)] += damp * delta[k];
                trial.v[static_cast<std::size_t>(k + 1)] += damp * delta[m + k];
            }
            if (trial.min_gap() < opt.min_gap) continue;
            std::vector<double> tu(static_cast<std::size_t>(m)), tv(static_cast<std::size_t>(m));
            residual(trial, tu, tv);
            const double tnorm = std::max(max_abs(tu), max_abs(tv));
            if (tnorm < rnorm) {
                res.state = trial;
                accepted = true;
            }
        }
        if (!accepted) {
            return res;
        }
    }
    return res;
}

double sar_fold_search(double ratio, const Grid1D& g1, const FoldSearchOptions& opt) {
    if (ratio < 0.0) throw ValidationError("sar_fold_search: ratio must be >= 0");
    Params p;
    p.eps = 0.0;
    double lambda_ok = 0.0;
    SarState sol(g1);
    double step = opt.lambda_step;
    while (step >= opt.min_step && lambda_ok < opt.lambda_max) {
        p.lambda = lambda_ok + step;
        p.mu = ratio * p.lambda;
        const SarNewtonResult trial = sar_steady_solve(p, g1, sol);
        if (trial.converged) {
            lambda_ok = p.lambda;
            sol = trial.state;
        } else {
            step *= 0.5;
        }
    }
    return lambda_ok;
}

} // namespace memsfbp
