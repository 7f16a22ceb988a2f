#include "memsfbp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "memsfbp/corpus.hpp"
#include "memsfbp/diagnostics.hpp"
#include "memsfbp/dynamics.hpp"
#include "memsfbp/io.hpp"
#include "memsfbp/mms.hpp"
#include "memsfbp/numerics.hpp"
#include "memsfbp/parallel.hpp"
#include "memsfbp/small_aspect.hpp"
#include "memsfbp/steady.hpp"

namespace memsfbp {

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunSetup {
    Params params;
    GapParams gap;
    Grid1D g1;
    Grid2D g2;
    TimeControls tc;
};

RunSetup setup_from(const Config& kv) {
    RunSetup s;
    s.params.eps = kv.get_double("params", "eps", 0.1);
    s.params.lambda = kv.get_double("params", "lambda", 0.0);
    s.params.mu = kv.get_double("params", "mu", 0.0);
    s.gap.kappa = kv.get_double("params", "kappa", 0.25);
    s.gap.touchdown_gap = kv.get_double("params", "touchdown_gap", 1e-3);
    s.gap.validate();
    const int nx = kv.get_int("grid", "nx", 200);
    const int nz = kv.get_int("grid", "nz", 100);
    s.g1 = Grid1D(nx);
    s.g2 = Grid2D(nx, nz);
    s.tc.dt = kv.get_double("time", "dt", 1e-4);
    s.tc.t_end = kv.get_double("time", "t_end", 1.0);
    s.tc.record_every = kv.get_int("time", "record_every", 10);
    s.tc.inner_iterations = kv.get_int("time", "inner_iterations", 0);
    s.tc.validate();
    return s;
}

MembraneState initial_state(const Config& kv, const Grid1D& g1) {
    const double ua = kv.get_double("params", "init_u_amp", 0.0);
    const double va = kv.get_double("params", "init_v_amp", 0.0);
    const double us = kv.get_double("params", "init_u_skew", 0.0);
    const double vs = kv.get_double("params", "init_v_skew", 0.0);
    return sample_state(
        g1, [&](double x) { return -ua * (1.0 - x * x) * (1.0 + us * x); },
        [&](double x) { return -1.0 + va * (1.0 - x * x) * (1.0 + vs * x); });
}

void write_manifest(const ExperimentConfig& cfg, const RunSetup& s, double wall_seconds) {
    nlohmann::ordered_json j;
    j["mode"] = cfg.mode;
    j["version"] = kVersion;
    j["grid"] = {{"nx", s.g1.n}, {"nz", s.g2.nz}};
    j["config"] = cfg.kv.flattened();
    j["wall_seconds"] = wall_seconds;
    std::ofstream out(cfg.output_dir + "/manifest.json");
    out << j.dump(2) << '\n';
}

void report_to_json(nlohmann::ordered_json& arr, const CheckReport& rep) {
    nlohmann::ordered_json j;
    j["name"] = rep.name;
    j["passed"] = rep.passed;
    j["worst_value"] = rep.worst_value;
    j["tolerance"] = rep.tolerance;
    j["location"] = rep.location;
    j["negative_control"] = rep.negative_control;
    arr.push_back(j);
}

int run_evolve(const ExperimentConfig& cfg, const RunSetup& s, bool sar_model) {
    const MembraneState s0 = initial_state(cfg.kv, s.g1);
    const SimRecord rec = sar_model ? sar_run_evolution(s0, s.params, s.tc, s.gap)
                                    : run_evolution(s0, s.params, s.tc, s.gap, s.g2);
    write_record_csv(rec, cfg.output_dir + "/record.csv");
    write_record_summary_json(rec, cfg.output_dir + "/summary.json");
    if (cfg.kv.get_bool("output", "write_snapshots", true)) {
        write_snapshots_csv(rec, cfg.output_dir + "/snapshots", "state");
    }
    if (cfg.kv.get_bool("output", "write_raster", false) && !rec.snapshots.empty()) {
        // final potential pulled back to physical coordinates
        const MembraneState& last = rec.snapshots.back();
        Field2D phi_tilde;
        if (sar_model) {
            phi_tilde = Field2D(s.g2);
            for (int i = 0; i <= s.g2.gx.n; ++i) {
                for (int j = 0; j <= s.g2.nz; ++j) {
                    phi_tilde.at(i, j) = s.g2.z(j);  // affine narrow-gap profile
                }
            }
        } else {
            phi_tilde = solve_potential(last, s.params, s.g2).phi_tilde;
        }
        const auto samples = rasterize_physical(phi_tilde, last, s.g1.n, s.g2.nz * 2);
        write_samples_csv(samples, cfg.output_dir + "/raster.csv");
    }
    std::cout << "verdict: " << to_string(rec.verdict);
    if (rec.verdict == Verdict::touchdown) {
        std::cout << " at t* = " << rec.touchdown_time;
    }
    std::cout << "\n";
    return 0;
}

int run_steady(const ExperimentConfig& cfg, const RunSetup& s) {
    SteadyOptions opt;
    opt.tol = cfg.kv.get_double("newton", "tol", 1e-9);
    opt.max_iterations = cfg.kv.get_int("newton", "max_iterations", 50);
    opt.fd_scale = cfg.kv.get_double("newton", "fd_scale", 1e-6);
    const SteadyResult res = steady_newton(s.params, initial_state(cfg.kv, s.g1), s.g2, opt);

    std::ofstream out(cfg.output_dir + "/steady.csv");
    write_csv_header(out, {"x", "u", "v"});
    for (int i = 0; i <= s.g1.n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        out << format_sci(s.g1.x(i)) << ',' << format_sci(res.point.state.u[si]) << ','
            << format_sci(res.point.state.v[si]) << '\n';
    }
    nlohmann::ordered_json j;
    j["converged"] = res.converged;
    j["lambda"] = res.point.lambda;
    j["mu"] = res.point.mu;
    j["newton_iters"] = res.point.newton_iters;
    j["residual"] = res.residual;
    j["spectral_bound"] = res.point.spectral_bound;
    j["min_gap"] = res.point.state.min_gap();
    std::ofstream js(cfg.output_dir + "/summary.json");
    js << j.dump(2) << '\n';
    if (cfg.kv.get_bool("output", "write_matrix", false)) {
        const OperatorAssembly a = assemble_operator(res.point.state, s.params, s.g2);
        dump_matrix_coo(a.matrix, cfg.output_dir + "/operator_coo.txt");
    }
    std::cout << (res.converged ? "converged" : "no steady state found") << " in "
              << res.point.newton_iters << " iterations, residual " << res.residual << "\n";
    return res.converged ? 0 : 1;
}

int run_branch(const ExperimentConfig& cfg, const RunSetup& s) {
    ContinuationControls ctl;
    ctl.lambda_step = cfg.kv.get_double("newton", "lambda_step", 0.01);
    ctl.min_step = cfg.kv.get_double("newton", "min_step", 1e-6);
    ctl.max_lambda = cfg.kv.get_double("newton", "max_lambda", 10.0);
    ctl.arclength_step = cfg.kv.get_double("newton", "arclength_step", 0.02);
    ctl.points_past_fold = cfg.kv.get_int("newton", "points_past_fold", 5);
    ctl.compute_spectrum = cfg.kv.get_bool("newton", "compute_spectrum", true);
    ctl.newton.tol = cfg.kv.get_double("newton", "tol", 1e-9);
    ctl.newton.max_iterations = cfg.kv.get_int("newton", "max_iterations", 50);
    ctl.newton.fd_scale = cfg.kv.get_double("newton", "fd_scale", 1e-6);
    const double ratio = cfg.kv.get_double("newton", "ratio", 1.0);

    const SteadyBranch branch = trace_branch(ratio, s.params, s.g2, ctl);

    std::ofstream out(cfg.output_dir + "/branch.csv");
    write_csv_header(out, {"lambda", "mu", "min_gap", "u_mid", "v_mid",
                           "spectral_bound", "fold_flag"});
    const int mid = s.g1.n / 2;
    for (const BranchPoint& bp : branch.points) {
        out << format_sci(bp.lambda) << ',' << format_sci(bp.mu) << ','
            << format_sci(bp.state.min_gap()) << ','
            << format_sci(bp.state.u[static_cast<std::size_t>(mid)]) << ','
            << format_sci(bp.state.v[static_cast<std::size_t>(mid)]) << ','
            << format_sci(bp.spectral_bound) << ',' << (bp.fold_flag ? "true" : "false")
            << '\n';
    }
    nlohmann::ordered_json j;
    j["ratio"] = branch.direction;
    j["points"] = branch.points.size();
    j["fold_found"] = branch.fold_found;
    j["fold_lambda"] = branch.fold_lambda;
    j["termination"] = branch.termination;
    std::ofstream js(cfg.output_dir + "/summary.json");
    js << j.dump(2) << '\n';
    std::cout << "branch: " << branch.points.size() << " points, termination "
              << branch.termination;
    if (branch.fold_found) std::cout << ", fold at lambda = " << branch.fold_lambda;
    std::cout << "\n";
    return 0;
}

int run_sweep(const ExperimentConfig& cfg, const RunSetup& s) {
    const double lam_min = cfg.kv.get_double("sweep", "lambda_min", 0.1);
    const double lam_max = cfg.kv.get_double("sweep", "lambda_max", 1.0);
    const int count = cfg.kv.get_int("sweep", "count", 10);
    const double ratio = cfg.kv.get_double("sweep", "ratio", 1.0);
    if (count < 1) throw ConfigError("sweep.count must be >= 1");

    struct SweepRow {
        double lambda, mu;
        Verdict verdict;
        double t_final, gap_final;
    };
    std::vector<SweepRow> rows(static_cast<std::size_t>(count));

    // Worker pool over sweep points; each worker owns its state, the merge
    // is by index.
    parallel_for(count, [&](std::int64_t k) {
        Params p = s.params;
        p.lambda = count == 1 ? lam_min
                              : lam_min + (lam_max - lam_min) * static_cast<double>(k) /
                                              (count - 1);
        p.mu = ratio * p.lambda;
        const SimRecord rec =
            run_evolution(MembraneState(s.g1), p, s.tc, s.gap, s.g2);
        SweepRow& row = rows[static_cast<std::size_t>(k)];
        row.lambda = p.lambda;
        row.mu = p.mu;
        row.verdict = rec.verdict;
        row.t_final = rec.verdict == Verdict::touchdown ? rec.touchdown_time
                                                        : (rec.times.empty() ? 0.0 : rec.times.back());
        row.gap_final = rec.gap_min.empty() ? 0.0 : rec.gap_min.back();
    });

    std::ofstream out(cfg.output_dir + "/sweep.csv");
    write_csv_header(out, {"lambda", "mu", "verdict", "t_final", "gap_min_final"});
    for (const SweepRow& row : rows) {
        out << format_sci(row.lambda) << ',' << format_sci(row.mu) << ','
            << to_string(row.verdict) << ',' << format_sci(row.t_final) << ','
            << format_sci(row.gap_final) << '\n';
    }
    return 0;
}

int run_thresholds(const ExperimentConfig& cfg) {
    const std::vector<double> eps_list =
        cfg.kv.get_double_list("thresholds", "eps_list", {0.1, 0.01});
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double eps : eps_list) {
        nlohmann::ordered_json j;
        j["eps"] = eps;
        j["m2"] = m2_threshold(eps);
        if (eps > 0.0) {
            j["xi0"] = xi0(eps);
            j["xi0_upper_bound"] = 0.5 * M_PI / eps;
        } else {
            j["xi0"] = nullptr;  // defined only for eps > 0; the limit is 2
        }
        arr.push_back(j);
    }
    std::ofstream out(cfg.output_dir + "/thresholds.json");
    out << arr.dump(2) << '\n';
    std::cout << arr.dump(2) << "\n";
    return 0;
}

int run_convergence(const ExperimentConfig& cfg, const RunSetup& s) {
    // Full-model vs narrow-gap evolution discrepancy over an eps sweep, plus
    // the manufactured-solution order table.
    const std::vector<double> eps_list =
        cfg.kv.get_double_list("convergence", "eps_list", {0.4, 0.2, 0.1, 0.05});
    Params p = s.params;
    if (!cfg.kv.has("params", "lambda")) p.lambda = 0.2;
    if (!cfg.kv.has("params", "mu")) p.mu = 0.2;

    const MembraneState s0 = initial_state(cfg.kv, s.g1);
    Params psar = p;
    psar.eps = 0.0;
    const SimRecord sar_rec = sar_run_evolution(s0, psar, s.tc, s.gap);

    std::ofstream out(cfg.output_dir + "/sar_convergence.csv");
    write_csv_header(out, {"eps", "sup_discrepancy"});
    std::vector<double> discrepancies;
    for (double eps : eps_list) {
        Params pe = p;
        pe.eps = eps;
        const SimRecord full = run_evolution(s0, pe, s.tc, s.gap, s.g2);
        double sup = 0.0;
        const std::size_t strides = std::min(full.snapshots.size(), sar_rec.snapshots.size());
        for (std::size_t k = 0; k < strides; ++k) {
            sup = std::max(sup, max_abs_diff(full.snapshots[k].u, sar_rec.snapshots[k].u) +
                                    max_abs_diff(full.snapshots[k].v, sar_rec.snapshots[k].v));
        }
        discrepancies.push_back(sup);
        out << format_sci(eps) << ',' << format_sci(sup) << '\n';
    }

    const std::vector<double> nx_list =
        cfg.kv.get_double_list("convergence", "mms_nx_list", {50, 100, 200});
    std::ofstream mms_out(cfg.output_dir + "/mms_order.csv");
    write_csv_header(mms_out, {"nx", "max_error", "ratio"});
    double prev = -1.0;
    for (double nx_d : nx_list) {
        const int nx = static_cast<int>(nx_d);
        const MmsResult r = run_mms(nx, nx / 2);
        mms_out << nx << ',' << format_sci(r.max_error) << ','
                << (prev > 0.0 ? format_sci(prev / r.max_error) : "") << '\n';
        prev = r.max_error;
    }

    bool decreasing = true;
    for (std::size_t k = 1; k < discrepancies.size(); ++k) {
        decreasing = decreasing && discrepancies[k] < discrepancies[k - 1];
    }
    if (discrepancies.size() > 1) {
        std::cout << "sar discrepancy strictly decreasing: "
                  << (decreasing ? "yes" : "NO") << "\n";
    } else {
        std::cout << "single-entry eps list: no comparison claims\n";
    }
    return 0;
}

int run_verify(const ExperimentConfig& cfg, const RunSetup& s) {
    std::vector<CheckReport> reports;

    // Potential bounds and chain-rule identities across the bundled corpus.
    const std::vector<MembraneState> corpus = bundled_corpus(s.g1);
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        const PotentialField phi = solve_potential(corpus[k], s.params, s.g2);
        CheckReport mp = max_principle_check(phi);
        mp.name += "-corpus-" + std::to_string(k);
        reports.push_back(mp);
        CheckReport cu = chain_rule_check(corpus[k], phi, Edge::upper);
        cu.name += "-corpus-" + std::to_string(k);
        reports.push_back(cu);
        CheckReport cl = chain_rule_check(corpus[k], phi, Edge::lower);
        cl.name += "-corpus-" + std::to_string(k);
        reports.push_back(cl);
    }

    // Load normalization g(0,-1) = (1,1).
    for (double eps : {0.05, 0.1, 0.4}) {
        Params p = s.params;
        p.eps = eps;
        const MembraneState rest(s.g1);
        const TraceLoad load = membrane_loads(rest, solve_potential(rest, p, s.g2), p);
        CheckReport rep;
        rep.name = "load-normalization-eps-" + std::to_string(eps);
        rep.tolerance = 1e-10;
        for (std::size_t i = 0; i < load.g1.size(); ++i) {
            rep.worst_value = std::max({rep.worst_value, std::abs(load.g1[i] - 1.0),
                                        std::abs(load.g2[i] - 1.0)});
        }
        rep.passed = rep.worst_value <= rep.tolerance;
        reports.push_back(rep);
    }

    // Evenness of a short even run and swap equivariance of a mirrored pair.
    {
        Params p = s.params;
        p.lambda = 0.15;
        p.mu = 0.05;
        TimeControls tc;
        tc.dt = 1e-3;
        tc.t_end = 0.05;
        tc.record_every = 10;
        const SimRecord even_run = run_evolution(MembraneState(s.g1), p, tc, s.gap, s.g2);
        for (CheckReport rep : symmetry_checks(even_run)) {
            reports.push_back(rep);
        }
        Params q = p;
        std::swap(q.lambda, q.mu);
        const SimRecord swapped_run =
            run_evolution(swap_state(MembraneState(s.g1)), q, tc, s.gap, s.g2);
        reports.push_back(swap_equivariance_check(even_run, swapped_run));
    }

    // Swap involution over the corpus.
    {
        CheckReport rep;
        rep.name = "swap-involution";
        rep.tolerance = 1e-14;
        for (const MembraneState& st : corpus) {
            const MembraneState twice = swap_state(swap_state(st));
            rep.worst_value = std::max({rep.worst_value, max_abs_diff(twice.u, st.u),
                                        max_abs_diff(twice.v, st.v)});
        }
        rep.passed = rep.worst_value <= rep.tolerance;
        reports.push_back(rep);
    }

    // Lyapunov weights on a fine grid: unit mass and the eigenrelation.
    {
        const Grid1D fine(20000);
        const LyapunovParams lp(s.params.eps, 1.0, fine);
        CheckReport mass;
        mass.name = "lyapunov-zeta1-mass";
        mass.tolerance = 1e-8;
        mass.worst_value = std::abs(trapezoid(lp.zeta1, fine.h) - 1.0);
        mass.passed = mass.worst_value <= mass.tolerance;
        reports.push_back(mass);

        const std::vector<double> zxx = derivative2(lp.zeta1, fine.h);
        CheckReport eig;
        eig.name = "lyapunov-zeta1-eigenrelation";
        eig.tolerance = 10.0 * fine.h * fine.h;
        for (int i = 1; i < fine.n; ++i) {
            const std::size_t si = static_cast<std::size_t>(i);
            eig.worst_value =
                std::max(eig.worst_value, std::abs(-zxx[si] - lp.mu1 * lp.zeta1[si]));
        }
        eig.passed = eig.worst_value <= eig.tolerance;
        reports.push_back(eig);
    }

    // Negative controls: a corrupted potential must fail the bound check and
    // an asymmetric run must fail the evenness check.
    {
        PotentialField bad = solve_potential(corpus[3], s.params, s.g2);
        bad.phi_tilde.at(s.g1.n / 2, s.g2.nz / 2) = 1.5;
        CheckReport rep = max_principle_check(bad);
        rep.name = "negcontrol-corrupted-potential";
        rep.negative_control = true;
        reports.push_back(rep);

        Params p = s.params;
        p.lambda = 0.1;
        p.mu = 0.1;
        TimeControls tc;
        tc.dt = 1e-3;
        tc.t_end = 0.02;
        tc.record_every = 5;
        const MembraneState skewed = sample_state(
            s.g1, [](double x) { return -0.2 * (1.0 - x * x) * (1.0 + 0.5 * x); },
            [](double) { return -1.0; });
        const SimRecord rec = run_evolution(skewed, p, tc, s.gap, s.g2);
        for (CheckReport rep2 : symmetry_checks(rec)) {
            rep2.name = "negcontrol-" + rep2.name;
            rep2.negative_control = true;
            reports.push_back(rep2);
        }
    }

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    int failures = 0;
    int negcontrol_fired = 0;
    for (const CheckReport& rep : reports) {
        report_to_json(arr, rep);
        if (rep.negative_control) {
            negcontrol_fired += rep.passed ? 0 : 1;
        } else if (!rep.passed) {
            ++failures;
            std::cout << "FAILED " << rep.name << ": worst " << rep.worst_value
                      << " tol " << rep.tolerance << " at " << rep.location << "\n";
        }
    }
    std::ofstream out(cfg.output_dir + "/checks.json");
    out << arr.dump(2) << '\n';
    std::cout << "verify: " << reports.size() << " checks, " << failures
              << " failures (negative controls fired: " << negcontrol_fired << ")\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int run_experiment(const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.output_dir);
    const RunSetup s = setup_from(cfg.kv);

    int status = 0;
    if (cfg.mode == "evolve") {
        status = run_evolve(cfg, s, /*sar_model=*/false);
    } else if (cfg.mode == "sar") {
        status = run_evolve(cfg, s, /*sar_model=*/true);
    } else if (cfg.mode == "steady") {
        status = run_steady(cfg, s);
    } else if (cfg.mode == "branch") {
        status = run_branch(cfg, s);
    } else if (cfg.mode == "sweep") {
        status = run_sweep(cfg, s);
    } else if (cfg.mode == "thresholds") {
        status = run_thresholds(cfg);
    } else if (cfg.mode == "verify") {
        status = run_verify(cfg, s);
    } else if (cfg.mode == "convergence") {
        status = run_convergence(cfg, s);
    } else {
        throw ConfigError("unknown mode '" + cfg.mode + "'");
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(cfg, s, wall);
    return status;
}

} // namespace memsfbp
