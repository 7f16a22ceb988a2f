#include <doctest.h>

#include <cmath>

#include "memsfbp/corpus.hpp"
#include "memsfbp/diagnostics.hpp"
#include "memsfbp/mms.hpp"
#include "memsfbp/numerics.hpp"

using namespace memsfbp;

TEST_CASE("lyapunov weights") {
    SUBCASE("unit mass on a fine grid, O(h^2) on coarse ones") {
        const Grid1D fine(20000);
        const LyapunovParams lp_fine(0.1, 1.0, fine);
        CHECK(std::abs(trapezoid(lp_fine.zeta1, fine.h) - 1.0) <= 1e-8);

        const Grid1D coarse(100);
        const LyapunovParams lp_coarse(0.1, 1.0, coarse);
        const double err = std::abs(trapezoid(lp_coarse.zeta1, coarse.h) - 1.0);
        CHECK(err <= coarse.h * coarse.h);  // trapezoid is second order
        CHECK(err > 1e-8);                  // and genuinely not exact here
    }

    SUBCASE("zeta1 satisfies the discrete eigenrelation to O(h^2)") {
        const Grid1D g(256);
        const LyapunovParams lp(0.2, 0.5, g);
        const auto zxx = derivative2(lp.zeta1, g.h);
        for (int i = 1; i < g.n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            CHECK(std::abs(-zxx[si] - lp.mu1 * lp.zeta1[si]) <= 2.0 * g.h * g.h);
        }
        CHECK(lp.mu1 == doctest::Approx(M_PI * M_PI / 4.0).epsilon(1e-15));
    }

    SUBCASE("parameter algebra") {
        const Grid1D g(32);
        const LyapunovParams lp(0.3, 1.44, g);
        CHECK(lp.alpha == doctest::Approx(0.09 / 1.09).epsilon(1e-15));
        CHECK(lp.beta == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(lp.p_exp == doctest::Approx(1.0 + 2.0 * (M_PI * M_PI / 4.0) * 0.09).epsilon(1e-15));
    }
}

TEST_CASE("lyapunov_E values") {
    const Grid1D g(128);
    const LyapunovParams lp(0.25, 1.0, g);

    SUBCASE("zero for the rest displacement") {
        CHECK(lyapunov_E(MembraneState(g), lp) == 0.0);
    }

    SUBCASE("constant displacement reduces to the weight mass") {
        MembraneState s(g);
        for (double& x : s.u) x = -0.5;
        const double mass = trapezoid(lp.zeta1, g.h);
        const double expect = (-0.5 + lp.alpha / 8.0) * mass;
        CHECK(lyapunov_E(s, lp) == doctest::Approx(expect).epsilon(1e-13));
        // with unit mass this is exactly -1/2 + alpha/8
        CHECK(std::abs(lyapunov_E(s, lp) - (-0.5 + lp.alpha / 8.0)) <= 1e-3);
    }
}

TEST_CASE("max principle check and its negative control") {
    const Grid2D g2(48, 24);
    Params p;
    p.eps = 0.2;

    SUBCASE("rest-state potential passes with exact bounds") {
        const PotentialField phi = solve_potential(MembraneState(g2.gx), p, g2);
        const CheckReport rep = max_principle_check(phi);
        CHECK(rep.passed);
        CHECK(rep.worst_value == 0.0);
    }

    SUBCASE("every corpus state passes") {
        for (const MembraneState& s : bundled_corpus(g2.gx)) {
            CHECK(max_principle_check(solve_potential(s, p, g2)).passed);
        }
    }

    SUBCASE("a corrupted node is flagged with its location") {
        PotentialField phi = solve_potential(bundled_corpus(g2.gx)[5], p, g2);
        phi.phi_tilde.at(11, 7) = 1.5;
        const CheckReport rep = max_principle_check(phi);
        CHECK_FALSE(rep.passed);
        CHECK(rep.worst_value == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.location == "node (11,7)");
    }
}

TEST_CASE("chain rule residual") {
    SUBCASE("rest state: identically zero to solver tolerance") {
        const Grid2D g2(48, 24);
        Params p;
        p.eps = 0.2;
        const PotentialField phi = solve_potential(MembraneState(g2.gx), p, g2);
        for (Edge e : {Edge::lower, Edge::upper}) {
            CHECK(max_abs(chain_rule_residual(MembraneState(g2.gx), phi, e)) <= 1e-12);
        }
    }

    SUBCASE("manufactured case passes and the residual drops under refinement") {
        double prev_up = -1.0;
        for (int nx : {50, 100}) {
            const Grid2D g2(nx, nx / 2);
            const MmsCase c = make_mms_case(g2.gx);
            const MmsResult r = run_mms(nx, nx / 2);
            const CheckReport up = chain_rule_check(c.state, r.recovered, Edge::upper);
            const CheckReport lo = chain_rule_check(c.state, r.recovered, Edge::lower);
            CHECK(up.passed);
            CHECK(lo.passed);
            if (prev_up > 0.0) {
                CHECK(prev_up / up.worst_value >= 1.8);  // at least first order
            }
            prev_up = up.worst_value;
        }
    }

    SUBCASE("corpus states stay within the calibrated envelope") {
        const Grid2D g2(64, 32);
        Params p;
        p.eps = 0.1;
        for (const MembraneState& s : bundled_corpus(g2.gx)) {
            const PotentialField phi = solve_potential(s, p, g2);
            CHECK(chain_rule_check(s, phi, Edge::upper).passed);
            CHECK(chain_rule_check(s, phi, Edge::lower).passed);
        }
    }
}

TEST_CASE("energy norms") {
    const Grid2D g2(64, 32);

    SUBCASE("rest state: all zero") {
        Params p;
        p.eps = 0.2;
        const EnergyNorms n = energy_norms(solve_potential(MembraneState(g2.gx), p, g2), p);
        CHECK(n.dx_psi == 0.0);
        CHECK(n.psi_over_eps == 0.0);
        CHECK(n.dz_psi_over_eps == 0.0);
        CHECK(n.dxdz_psi_over_eps == 0.0);
        CHECK(n.dzz_psi_over_eps2 == 0.0);
        CHECK(n.trace_l2_over_eps == 0.0);
        CHECK(n.trace_gagliardo_over_eps == 0.0);
    }

    SUBCASE("scaled norms stay bounded as eps shrinks") {
        const MembraneState s = bundled_corpus(g2.gx)[17];
        double k1_max = 0.0, k1_min = 1e300;
        double first_max = -1.0;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            Params p;
            p.eps = eps;
            const EnergyNorms n = energy_norms(solve_potential(s, p, g2), p);
            const double certificate =
                std::max({n.dx_psi, n.psi_over_eps, n.dz_psi_over_eps,
                          n.dxdz_psi_over_eps, n.dzz_psi_over_eps2});
            if (first_max < 0.0) first_max = certificate;
            // no blow-up toward the narrow-gap limit: every scaled norm stays
            // within a constant of its value at the largest eps
            CHECK(n.dx_psi <= 3.0 * first_max);
            CHECK(n.psi_over_eps <= 3.0 * first_max);
            CHECK(n.dz_psi_over_eps <= 3.0 * first_max);
            CHECK(n.dxdz_psi_over_eps <= 3.0 * first_max);
            CHECK(n.dzz_psi_over_eps2 <= 3.0 * first_max);
            CHECK(n.trace_l2_over_eps <= 3.0 * first_max);
            k1_max = std::max(k1_max, certificate);
            k1_min = std::min(k1_min, certificate);
        }
        // the boundedness certificate max(five scaled norms) varies little
        CHECK(k1_max / k1_min < 3.0);
    }
}

TEST_CASE("symmetry checks flag asymmetry and pass equivariant pairs") {
    const Grid1D g(32);

    SimRecord rec;
    rec.snapshots.push_back(MembraneState(g));
    rec.times.push_back(0.0);

    SUBCASE("even snapshots pass") {
        const auto reps = symmetry_checks(rec);
        REQUIRE(reps.size() == 2);
        CHECK(reps[0].passed);
        CHECK(reps[1].passed);
    }

    SUBCASE("an asymmetric snapshot fails with its location") {
        MembraneState skew = sample_state(
            g, [](double x) { return -0.2 * (1.0 - x * x) * (1.0 + 0.5 * x); },
            [](double) { return -1.0; });
        rec.snapshots.push_back(skew);
        rec.times.push_back(1.0);
        const auto reps = symmetry_checks(rec);
        CHECK_FALSE(reps[0].passed);
        CHECK(reps[0].worst_value > 1e-3);
        CHECK(reps[0].location.find("t index 1") != std::string::npos);
        CHECK(reps[1].passed);  // v stayed even
    }

    SUBCASE("swap equivariance of identical mirrored records") {
        SimRecord other;
        other.snapshots.push_back(swap_state(rec.snapshots[0]));
        other.times.push_back(0.0);
        const CheckReport rep = swap_equivariance_check(rec, other);
        CHECK(rep.passed);
        CHECK(rep.worst_value == 0.0);
    }

    SUBCASE("mismatched records fail loudly") {
        SimRecord other;
        const CheckReport rep = swap_equivariance_check(rec, other);
        CHECK_FALSE(rep.passed);
    }
}
