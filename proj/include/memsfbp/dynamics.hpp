#pragma once

#include <string>
#include <vector>

#include "memsfbp/elliptic.hpp"
#include "memsfbp/params.hpp"
#include "memsfbp/state.hpp"

namespace memsfbp {

struct TimeControls {
    double dt = 1e-4;
    double t_end = 1.0;
    int record_every = 10;   // snapshot stride in steps
    int inner_iterations = 0;  // optional fixed-point refresh of the load (0 = lagged load)

    void validate() const;
};

enum class Verdict { reached_t_end, touchdown, diverged };

const char* to_string(Verdict v) noexcept;

/// Evolution record: snapshots plus the per-stride scalar series used by the
/// diagnostics (gap minimum, Lyapunov value E_alpha, load max-norms).
struct SimRecord {
    std::vector<MembraneState> snapshots;
    std::vector<double> times;
    std::vector<double> gap_min;
    std::vector<double> e_alpha;
    std::vector<double> max_g1, max_g2;
    Verdict verdict = Verdict::reached_t_end;
    double touchdown_time = -1.0;  // interpolated first crossing, if touchdown
    std::string model = "full";    // "full" or "sar"
};

/// One IMEX backward-Euler step: the electrostatic load is evaluated at the
/// old state (one elliptic solve), diffusion is implicit,
///   (I + dt A_h) u+      = u - dt lambda g1(s),
///   (I + dt A_h) (v+ +1) = (v+1) + dt mu g2(s),
/// with the boundary values re-pinned exactly. inner_iterations > 0 re-solves
/// the potential at the updated state that many times before accepting it.
MembraneState imex_step(const MembraneState& s, const Params& p, double dt,
                        const Grid2D& g2, int inner_iterations = 0);

/// Runs imex_step until t_end, touchdown (min gap below g.touchdown_gap,
/// crossing time linearly interpolated) or divergence (non-finite values or a
/// gap beyond 2). The initial state must be admissible.
SimRecord run_evolution(const MembraneState& s0, const Params& p,
                        const TimeControls& tc, const GapParams& g,
                        const Grid2D& g2);

/// The model's parameter-swap symmetry: (u,v) -> (-v-1, -u-1) exchanges the
/// roles of the membranes, and in reference coordinates the potential maps to
/// phi_tilde'(x, z') = 1 - phi_tilde(x, 1-z'). A solution for (lambda, mu)
/// turns into one for (mu, lambda). Involution up to rounding.
MembraneState swap_state(const MembraneState& s);
PotentialField swap_potential(const PotentialField& phi);

} // namespace memsfbp
