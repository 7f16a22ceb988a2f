#include "memsfbp/dynamics.hpp"

#include <cmath>

#include "memsfbp/diagnostics.hpp"
#include "memsfbp/numerics.hpp"

namespace memsfbp {

void TimeControls::validate() const {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw ValidationError("TimeControls: dt and t_end must be positive");
    }
    if (record_every < 1 || inner_iterations < 0) {
        throw ValidationError("TimeControls: record_every >= 1, inner_iterations >= 0");
    }
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::reached_t_end: return "reached_t_end";
        case Verdict::touchdown: return "touchdown";
        case Verdict::diverged: return "diverged";
    }
    return "?";
}

namespace {

TraceLoad compute_loads(const MembraneState& s, const Params& p, const Grid2D& g2) {
    const PotentialField phi = solve_potential(s, p, g2);
    return membrane_loads(s, phi, p);
}

MembraneState apply_imex(const MembraneState& s, const TraceLoad& load,
                         const Params& p, double dt) {
    const int n = s.grid.n;
    std::vector<double> rhs_u(static_cast<std::size_t>(n) - 1);
    std::vector<double> rhs_vhat(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        rhs_u[si - 1] = s.u[si] - dt * p.lambda * load.g1[si];
        rhs_vhat[si - 1] = (s.v[si] + 1.0) + dt * p.mu * load.g2[si];
    }
    const std::vector<double> u_new = solve_shifted_dirichlet_laplacian(rhs_u, dt, s.grid.h);
    const std::vector<double> vhat_new = solve_shifted_dirichlet_laplacian(rhs_vhat, dt, s.grid.h);

    MembraneState next(s.grid);
    next.t = s.t + dt;
    for (int i = 1; i < n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        next.u[si] = u_new[si - 1];
        next.v[si] = vhat_new[si - 1] - 1.0;
    }
    return next;
}

bool all_finite(const MembraneState& s) {
    for (double x : s.u) {
        if (!std::isfinite(x)) return false;
    }
    for (double x : s.v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace

MembraneState imex_step(const MembraneState& s, const Params& p, double dt,
                        const Grid2D& g2, int inner_iterations) {
    p.validate();
    TraceLoad load = compute_loads(s, p, g2);
    MembraneState next = apply_imex(s, load, p, dt);
    for (int k = 0; k < inner_iterations; ++k) {
        load = compute_loads(next, p, g2);
        next = apply_imex(s, load, p, dt);
    }
    return next;
}

SimRecord run_evolution(const MembraneState& s0, const Params& p,
                        const TimeControls& tc, const GapParams& g,
                        const Grid2D& g2) {
    p.validate();
    tc.validate();
    if (validate_state(s0, g) != StateClass::admissible) {
        throw ValidationError("run_evolution: initial state is not admissible");
    }

    SimRecord rec;
    rec.model = "full";
    const LyapunovParams lp(p.eps, p.lambda, s0.grid);

    auto record = [&](const MembraneState& s, const TraceLoad& load) {
        rec.snapshots.push_back(s);
        rec.times.push_back(s.t);
        rec.gap_min.push_back(s.min_gap());
        rec.e_alpha.push_back(lyapunov_E(s, lp));
        rec.max_g1.push_back(max_abs(load.g1));
        rec.max_g2.push_back(max_abs(load.g2));
    };

    MembraneState cur = s0;
    long step = 0;
    while (cur.t < tc.t_end - 0.5 * tc.dt) {
        TraceLoad load = compute_loads(cur, p, g2);
        if (step % tc.record_every == 0) {
            record(cur, load);
        }
        MembraneState next = apply_imex(cur, load, p, tc.dt);
        for (int k = 0; k < tc.inner_iterations; ++k) {
            if (next.min_gap() < g.touchdown_gap || !all_finite(next)) break;
            load = compute_loads(next, p, g2);
            next = apply_imex(cur, load, p, tc.dt);
        }
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
    record(cur, compute_loads(cur, p, g2));
    rec.verdict = Verdict::reached_t_end;
    return rec;
}

MembraneState swap_state(const MembraneState& s) {
    MembraneState out(s.grid);
    out.t = s.t;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        out.u[i] = -s.v[i] - 1.0;
        out.v[i] = -s.u[i] - 1.0;
    }
    return out;
}

PotentialField swap_potential(const PotentialField& phi) {
    const Grid2D& g2 = phi.phi_tilde.grid;
    PotentialField out;
    out.residual = phi.residual;
    out.psi = Field2D(g2);
    out.phi_tilde = Field2D(g2);
    for (int i = 0; i <= g2.gx.n; ++i) {
        for (int j = 0; j <= g2.nz; ++j) {
            const double val = 1.0 - phi.phi_tilde.at(i, g2.nz - j);
            out.phi_tilde.at(i, j) = val;
            out.psi.at(i, j) = val - g2.z(j);
        }
    }
    return out;
}

} // namespace memsfbp
