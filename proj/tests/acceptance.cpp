// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds are fixed here, not tuned at runtime.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "chemodg/celldensity.hpp"
#include "chemodg/output.hpp"
#include "chemodg/presets.hpp"
#include "chemodg/signals.hpp"
#include "chemodg/simulation.hpp"
#include "chemodg/structured.hpp"
#include "oracles.hpp"

using namespace chemodg;

namespace {

struct Failure {
    std::string message;
};

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

// One simulation trajectory stepped manually so both cell solvers can be
// evaluated on identical inputs each step.
struct DualSolverStats {
    int steps = 0;
    double min_truncated = 0.0;        // over all steps
    double worst_mass_violation = 0.0;  // relative, both solvers
    double worst_cross_diff = 0.0;      // relative to 1 + max linear
    double worst_signal_mean = 0.0;     // nonlocal only, relative
    int fallback_count = 0;
    bool linear_always_nonnegative = true;
};

DualSolverStats dual_solver_trajectory(const ModelParams& params, const P1Operators& ops,
                                       DGField u, CGField v, CGField w, int steps,
                                       const CellSolveOptions& cell_opts) {
    DualSolverStats stats;
    stats.min_truncated = dg_min(u);
    SignalSolveOptions signal_opts;
    const bool nonlocal = params.model == ModelKind::Nonlocal;
    const int tau = params.effective_tau();
    for (int m = 0; m < steps; ++m) {
        CGField v_next, w_next;
        if (nonlocal) {
            v_next = step_signal_nonlocal(ops, u, params.alpha, params.eta, signal_opts).field;
            w_next = step_signal_nonlocal(ops, u, params.beta, params.eta, signal_opts).field;
            double scale_v = 0.0, scale_w = 0.0;
            for (double x : v_next.values) scale_v = std::max(scale_v, std::abs(x));
            for (double x : w_next.values) scale_w = std::max(scale_w, std::abs(x));
            long double mv = 0.0L, mw = 0.0L;
            for (int i = 0; i < ops.mesh->num_vertices(); ++i) {
                mv += static_cast<long double>(ops.lumped_mass[i]) * v_next.values[i];
                mw += static_cast<long double>(ops.lumped_mass[i]) * w_next.values[i];
            }
            stats.worst_signal_mean =
                std::max({stats.worst_signal_mean,
                          std::abs(static_cast<double>(mv)) / std::max(1e-30, scale_v),
                          std::abs(static_cast<double>(mw)) / std::max(1e-30, scale_w)});
        } else {
            v_next = step_signal_local(ops, u, v, params.a, params.alpha, params.eta, tau,
                                       params.dt, signal_opts)
                         .field;
            w_next = step_signal_local(ops, u, w, params.d_decay, params.beta, params.eta, tau,
                                       params.dt, signal_opts)
                         .field;
        }

        double bound = dg_integral(u) + params.dt * params.lambda * dg_power_integral(u, params.rho);
        auto lin = step_cell_linear(ops, u, v_next, w_next, params, params.dt, cell_opts);
        auto trunc = step_cell_truncated(ops, u, v_next, w_next, params, params.dt, cell_opts);

        stats.min_truncated = std::min(stats.min_truncated, dg_min(trunc.u));
        double scale_bound = std::max(1.0, std::abs(bound));
        stats.worst_mass_violation =
            std::max({stats.worst_mass_violation,
                      (dg_integral(lin.u) - bound) / scale_bound,
                      (dg_integral(trunc.u) - bound) / scale_bound});

        if (lin.min_u >= 0.0) {
            double scale = 1.0 + dg_max(lin.u);
            double diff = 0.0;
            for (int k = 0; k < ops.mesh->num_elements(); ++k)
                diff = std::max(diff, std::abs(lin.u.values[k] - trunc.u.values[k]));
            stats.worst_cross_diff = std::max(stats.worst_cross_diff, diff / scale);
        } else {
            stats.linear_always_nonnegative = false;
        }

        // Advance with the default policy: linear unless it dips below the trigger.
        if (lin.min_u < -1e-10) {
            ++stats.fallback_count;
            u = std::move(trunc.u);
        } else {
            u = std::move(lin.u);
        }
        v = std::move(v_next);
        w = std::move(w_next);
        ++stats.steps;
    }
    return stats;
}

ModelParams random_valid_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ModelParams p;
    p.model = uni(rng) < 0.5 ? ModelKind::Local : ModelKind::Nonlocal;
    p.tau = uni(rng) < 0.5 ? 0 : 1;
    p.chi = 2.0 * uni(rng);
    p.xi = 2.0 * uni(rng);
    p.lambda = 1.5 * uni(rng);
    p.mu = 1.5 * uni(rng);
    p.c = 0.5 * uni(rng);
    p.n1 = 0.5 + uni(rng);
    p.n2 = 0.5 + uni(rng);
    p.n3 = 0.5 + uni(rng);
    p.rho = 1.0 + 0.2 * uni(rng);
    p.k = p.rho + 0.05 + 0.4 * uni(rng);
    p.gamma = 1.0 + uni(rng);
    p.a = 0.5 + uni(rng);
    p.d_decay = 0.5 + uni(rng);
    p.alpha = 0.8 + 0.7 * uni(rng);
    p.beta = 0.8 + 0.7 * uni(rng);
    p.dt = 1e-5;
    p.T = 0.0;
    return p;
}

DGField random_density(std::shared_ptr<const Mesh> mesh, std::mt19937_64& rng, double peak) {
    std::uniform_real_distribution<double> uni(-peak / 4.0, peak);
    DGField u(mesh);
    for (double& v : u.values) v = std::max(0.0, uni(rng));  // some exact zeros
    return u;
}

CGField random_signal(std::shared_ptr<const Mesh> mesh, std::mt19937_64& rng, double peak) {
    std::uniform_real_distribution<double> uni(0.0, peak);
    CGField s(mesh);
    for (double& v : s.values) v = uni(rng);
    return s;
}

double lumped_l2_error(const P1Operators& ops, const CGField& s,
                       const std::function<double(const Vec3&)>& exact) {
    long double err = 0.0L;
    for (int i = 0; i < ops.mesh->num_vertices(); ++i) {
        double d = s.values[i] - exact(ops.mesh->vertices[i]);
        err += static_cast<long double>(ops.lumped_mass[i]) * d * d;
    }
    return std::sqrt(static_cast<double>(err));
}

bool report(int number, const std::string& name, const Check& check) {
    if (check.ok)
        std::printf("[PASS] criterion %d: %s\n", number, name.c_str());
    else
        std::printf("[FAIL] criterion %d: %s -- %s\n", number, name.c_str(),
                    check.detail.c_str());
    std::fflush(stdout);
    return check.ok;
}

}  // namespace

int main() {
    int failures = 0;

    // Shared artifacts of the positivity suite (criteria 1, 2, 4, 7).
    Preset coarse = preset("test3-nonlocal-2d-coarse");
    auto coarse_mesh = build_preset_mesh(coarse.mesh);
    P1Operators coarse_ops = build_p1_operators(coarse_mesh);
    InitialData coarse_init = build_initial_data(coarse_mesh, coarse);

    CellSolveOptions suite_cell;
    suite_cell.tol = 1e-13;
    suite_cell.fp_tol = 1e-11;
    suite_cell.fp_max_iter = 400;

    DualSolverStats coarse_stats =
        dual_solver_trajectory(coarse.params, coarse_ops, coarse_init.u0, coarse_init.v0,
                               coarse_init.w0, 300, suite_cell);

    std::mt19937_64 rng(20240817);
    std::vector<DualSolverStats> random_stats;
    for (int config = 0; config < 50; ++config) {
        auto mesh = oracles::random_mesh(rng, 4);  // at most 4x4 criss-cross = 64 elements
        P1Operators ops = build_p1_operators(mesh);
        ModelParams p = random_valid_params(rng);
        DGField u0 = random_density(mesh, rng, 5.0);
        CGField v0 = random_signal(mesh, rng, 2.0);
        CGField w0 = random_signal(mesh, rng, 2.0);
        random_stats.push_back(dual_solver_trajectory(p, ops, u0, v0, w0, 8, suite_cell));
    }

    {
        Check check;
        check.require(coarse_stats.min_truncated >= -1e-12,
                      "coarse preset truncated minimum " + std::to_string(coarse_stats.min_truncated));
        int total_fallbacks = coarse_stats.fallback_count;
        for (const auto& s : random_stats) {
            check.require(s.min_truncated >= -1e-12,
                          "random config truncated minimum " + std::to_string(s.min_truncated));
            total_fallbacks += s.fallback_count;
        }
        if (total_fallbacks > 0)
            std::printf("  note: linear solver fallback engaged %d times (covered by the truncated path)\n",
                        total_fallbacks);
        failures += !report(1, "positivity of the truncated scheme (coarse preset + 50 random configs)",
                            check);
    }

    {
        Check check;
        check.require(coarse_stats.worst_mass_violation <= 1e-10,
                      "coarse preset mass violation " + std::to_string(coarse_stats.worst_mass_violation));
        for (const auto& s : random_stats)
            check.require(s.worst_mass_violation <= 1e-10,
                          "random config mass violation " + std::to_string(s.worst_mass_violation));

        // Conservation: no reactions, tight solves, equality within 1e-12.
        CellSolveOptions tight;
        tight.tol = 1e-14;
        for (int config = 0; config < 10; ++config) {
            auto mesh = oracles::random_mesh(rng, 4);
            P1Operators ops = build_p1_operators(mesh);
            ModelParams p = random_valid_params(rng);
            p.lambda = p.mu = p.c = 0.0;
            std::uniform_real_distribution<double> uni(0.5, 2.0);
            DGField u(mesh);
            for (double& v : u.values) v = uni(rng);
            CGField v0 = random_signal(mesh, rng, 1.0);
            CGField w0 = random_signal(mesh, rng, 1.0);
            for (int m = 0; m < 4; ++m) {
                CGField v_next, w_next;
                if (p.model == ModelKind::Nonlocal) {
                    v_next = step_signal_nonlocal(ops, u, p.alpha, p.eta).field;
                    w_next = step_signal_nonlocal(ops, u, p.beta, p.eta).field;
                } else {
                    v_next = step_signal_local(ops, u, v0, p.a, p.alpha, p.eta,
                                               p.effective_tau(), p.dt)
                                 .field;
                    w_next = step_signal_local(ops, u, w0, p.d_decay, p.beta, p.eta,
                                               p.effective_tau(), p.dt)
                                 .field;
                }
                double before = dg_integral(u);
                auto lin = step_cell_linear(ops, u, v_next, w_next, p, p.dt, tight);
                double drift = std::abs(dg_integral(lin.u) - before) / std::max(1.0, before);
                check.require(drift <= 1e-12, "conservation drift " + std::to_string(drift));
                auto trunc = step_cell_truncated(ops, u, v_next, w_next, p, p.dt, tight);
                double drift_t = std::abs(dg_integral(trunc.u) - before) / std::max(1.0, before);
                check.require(drift_t <= 1e-12,
                              "truncated conservation drift " + std::to_string(drift_t));
                u = std::move(lin.u);
                v0 = std::move(v_next);
                w0 = std::move(w_next);
            }
        }
        failures += !report(2, "discrete mass bound (every step) and exact conservation", check);
    }

    {
        Check check;
        std::mt19937_64 rng_upw(4242);
        for (int instance = 0; instance < 100; ++instance) {
            auto mesh = oracles::random_mesh(rng_upw, 2);  // at most 8 elements
            UpwindVelocity beta;
            beta.mesh = mesh;
            beta.per_element.resize(mesh->num_elements());
            std::uniform_real_distribution<double> uni(-4.0, 4.0);
            for (auto& v : beta.per_element) v = {uni(rng_upw), uni(rng_upw), 0.0};
            auto A = assemble_upwind(*mesh, beta);
            auto ref = oracles::upwind_by_definition(*mesh, beta);
            for (int i = 0; i < mesh->num_elements(); ++i)
                for (int j = 0; j < mesh->num_elements(); ++j)
                    check.require(std::abs(A.coeff(i, j) - ref[i][j]) <= 1e-13,
                                  "entry mismatch at instance " + std::to_string(instance));
        }
        // Hand-computed two-triangle case: beta = (1,0) over the unit square
        // split by its main diagonal gives entries {1, 0, -1, 0}.
        std::vector<Vec3> verts{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
        std::vector<std::array<int, 4>> elems{{0, 2, 3, -1}, {0, 1, 2, -1}};
        auto square = build_mesh(2, verts, elems);
        UpwindVelocity unit_x;
        unit_x.mesh = square;
        unit_x.per_element.assign(2, Vec3{1, 0, 0});
        auto A = assemble_upwind(*square, unit_x);
        check.require(std::abs(A.coeff(0, 0) - 1.0) <= 1e-14 && A.coeff(0, 1) == 0.0 &&
                          std::abs(A.coeff(1, 0) + 1.0) <= 1e-14 && A.coeff(1, 1) == 0.0,
                      "hand-computed case mismatch");
        failures += !report(3, "upwind operator matches the facet-loop reference (100 instances)", check);
    }

    {
        Check check;
        check.require(coarse_stats.worst_signal_mean <= 1e-10,
                      "worst relative lumped mean " + std::to_string(coarse_stats.worst_signal_mean));
        for (const auto& s : random_stats)
            check.require(s.worst_signal_mean <= 1e-10,
                          "random nonlocal mean " + std::to_string(s.worst_signal_mean));
        failures += !report(4, "nonlocal signals keep a zero lumped mean", check);
    }

    {
        Check check;
        ModelParams p1;  // attraction-only 3D experiment: d=3, n2=1, alpha=1, tau=1, n3=1, beta=1
        p1.tau = 1;
        p1.gamma = 1.75;
        auto r1 = validate_params(p1, 3);
        check.require(r1[0].exact && r1[0].threshold_num == 3 && r1[0].threshold_den == 2,
                      "expected exact threshold 3/2 for the d=3 set");
        check.require(r1[0].satisfied, "gamma=1.75 must satisfy the d=3 condition");
        ModelParams p1bad = p1;
        p1bad.gamma = 1.4;
        check.require(!validate_params(p1bad, 3)[0].satisfied, "gamma=1.4 must violate at d=3");

        ModelParams p3;  // nonlocal 2D experiment: alpha = 1.5
        p3.model = ModelKind::Nonlocal;
        p3.alpha = 1.5;
        p3.gamma = 1.75;
        auto r3 = validate_params(p3, 2);
        check.require(r3[0].exact && r3[0].threshold_num == 5 && r3[0].threshold_den == 3,
                      "expected exact threshold 5/3 for the d=2, alpha=1.5 set");
        check.require(r3[0].satisfied, "gamma=1.75 must satisfy the d=2 condition");
        failures += !report(5, "condgamma thresholds 3/2 (d=3) and 5/3 (d=2) in exact arithmetic", check);
    }

    {
        Check check;
        const long long snapshot_step = 300;  // t = 3e-3, the published snapshot horizon
        ModelParams undamped = coarse.params;
        undamped.T = 8e-3;  // extended so the plateau after collapse is observable
        auto run_undamped = run(undamped, coarse_ops, coarse_init.u0, coarse_init.v0, coarse_init.w0);
        ModelParams damped = undamped;
        damped.c = 0.1;
        damped.gamma = 1.75;
        auto run_damped = run(damped, coarse_ops, coarse_init.u0, coarse_init.v0, coarse_init.w0);

        auto verdict_undamped = classify_blowup(run_undamped.diagnostics);
        auto verdict_damped = classify_blowup(run_damped.diagnostics);
        check.require(verdict_undamped.classification == BlowUpClass::BlowUp,
                      "c=0 run classified as " + to_string(verdict_undamped.classification));
        check.require(verdict_damped.classification == BlowUpClass::Bounded,
                      "damped run classified as " + to_string(verdict_damped.classification));
        double max_undamped = run_undamped.diagnostics[snapshot_step].max_u;
        double max_damped = run_damped.diagnostics[snapshot_step].max_u;
        check.require(max_damped < 0.5 * max_undamped,
                      "max at t=3e-3: damped " + std::to_string(max_damped) + " vs undamped " +
                          std::to_string(max_undamped));
        failures += !report(6, "gradient damping prevents the collapse (c=0 vs c=0.1, gamma=1.75)", check);
    }

    {
        Check check;
        check.require(coarse_stats.worst_cross_diff <= 1e-9,
                      "coarse cross-solver difference " + std::to_string(coarse_stats.worst_cross_diff));
        for (const auto& s : random_stats)
            check.require(s.worst_cross_diff <= 1e-9,
                          "random config cross difference " + std::to_string(s.worst_cross_diff));
        failures += !report(7, "truncated and linear schemes agree when the linear solution is nonnegative",
                            check);
    }

    {
        Check check;
        // Spatially constant mode against the scalar oracle.
        auto ops = build_p1_operators(crisscross_mesh(4, 4));
        const double cval = 1.7, decay = 0.9, alpha = 1.3, dt = 2e-3, s_prev = 0.4;
        auto parab = step_signal_local(ops, DGField(ops.mesh, cval), CGField(ops.mesh, s_prev),
                                       decay, alpha, 0.0, 1, dt);
        double oracle1 = (s_prev / dt + std::pow(cval, alpha)) / (1.0 / dt + decay);
        for (double v : parab.field.values)
            check.require(std::abs(v - oracle1) <= 1e-10, "tau=1 constant mode off the oracle");
        auto ellip = step_signal_local(ops, DGField(ops.mesh, cval), CGField(ops.mesh, 0.0),
                                       decay, alpha, 0.0, 0, dt);
        double oracle0 = std::pow(cval, alpha) / decay;
        for (double v : ellip.field.values)
            check.require(std::abs(v - oracle0) <= 1e-10, "tau=0 constant mode off the oracle");

        // Manufactured solution s = exp(-t) cos(pi x) cos(pi y) with a = 1:
        // source g = (2 pi^2) s satisfies s_t = Lap s - s + g and Neumann walls.
        auto exact = [](const Vec3& p, double t) {
            return std::exp(-t) * std::cos(M_PI * p.x) * std::cos(M_PI * p.y);
        };
        const double T = 0.1;
        std::vector<double> errors;
        for (int n : {8, 16, 32}) {
            auto mops = build_p1_operators(rectangle_mesh(n, n));
            int steps = 8 * (n / 8) * (n / 8);  // dt ~ h^2 so time error scales with space
            double dt_n = T / steps;
            CGField s = cg_from_function(mops.mesh, [&](const Vec3& p) { return exact(p, 0.0); });
            for (int m = 1; m <= steps; ++m) {
                double t_next = m * dt_n;
                std::vector<double> source(mops.mesh->num_vertices());
                for (int i = 0; i < mops.mesh->num_vertices(); ++i)
                    source[i] = 2.0 * M_PI * M_PI * exact(mops.mesh->vertices[i], t_next);
                s = step_signal_system(mops, s, source, 1.0, 1, dt_n).field;
            }
            errors.push_back(lumped_l2_error(mops, s, [&](const Vec3& p) { return exact(p, T); }));
        }
        double order_h1 = std::log2(errors[0] / errors[1]);
        double order_h2 = std::log2(errors[1] / errors[2]);
        check.require(order_h1 >= 1.8 && order_h2 >= 1.8,
                      "spatial orders " + std::to_string(order_h1) + ", " + std::to_string(order_h2));

        // Temporal order against a small-step reference on a fixed mesh.
        auto mops = build_p1_operators(rectangle_mesh(32, 32));
        auto advance = [&](int steps) {
            double dt_n = T / steps;
            CGField s = cg_from_function(mops.mesh, [&](const Vec3& p) { return exact(p, 0.0); });
            for (int m = 1; m <= steps; ++m) {
                double t_next = m * dt_n;
                std::vector<double> source(mops.mesh->num_vertices());
                for (int i = 0; i < mops.mesh->num_vertices(); ++i)
                    source[i] = 2.0 * M_PI * M_PI * exact(mops.mesh->vertices[i], t_next);
                s = step_signal_system(mops, s, source, 1.0, 1, dt_n).field;
            }
            return s;
        };
        CGField ref = advance(4096);
        std::vector<double> terr;
        for (int steps : {16, 32, 64}) {
            CGField s = advance(steps);
            long double e = 0.0L;
            for (int i = 0; i < mops.mesh->num_vertices(); ++i) {
                double d = s.values[i] - ref.values[i];
                e += static_cast<long double>(mops.lumped_mass[i]) * d * d;
            }
            terr.push_back(std::sqrt(static_cast<double>(e)));
        }
        double order_t1 = std::log2(terr[0] / terr[1]);
        double order_t2 = std::log2(terr[1] / terr[2]);
        check.require(order_t1 >= 0.9 && order_t2 >= 0.9,
                      "temporal orders " + std::to_string(order_t1) + ", " + std::to_string(order_t2));
        failures += !report(8, "signal solver: scalar oracle and manufactured-solution convergence", check);
    }

    {
        Check check;
        ModelParams p = coarse.params;
        p.T = 100 * p.dt;
        auto r1 = run(p, coarse_ops, coarse_init.u0, coarse_init.v0, coarse_init.w0);
        auto r2 = run(p, coarse_ops, coarse_init.u0, coarse_init.v0, coarse_init.w0);
        check.require(diagnostics_csv_string(r1.diagnostics) == diagnostics_csv_string(r2.diagnostics),
                      "identical runs differ");

        ModelParams first_half = p;
        first_half.T = 50 * p.dt;
        auto part1 = run(first_half, coarse_ops, coarse_init.u0, coarse_init.v0, coarse_init.w0);
        save_checkpoint(part1.state, "/tmp/chemodg_acceptance_checkpoint.txt");
        SimState restored = load_checkpoint(coarse_mesh, "/tmp/chemodg_acceptance_checkpoint.txt");
        auto part2 = run(p, coarse_ops, restored.u, restored.v, restored.w, {}, {}, restored.step);
        std::vector<DiagnosticsRow> stitched = part1.diagnostics;
        stitched.insert(stitched.end(), part2.diagnostics.begin() + 1, part2.diagnostics.end());
        check.require(diagnostics_csv_string(stitched) == diagnostics_csv_string(r1.diagnostics),
                      "checkpoint-split run differs from the straight run");
        bool state_equal = true;
        for (size_t k = 0; k < r1.state.u.values.size(); ++k)
            state_equal = state_equal && part2.state.u.values[k] == r1.state.u.values[k];
        check.require(state_equal, "final states differ after restart");
        failures += !report(9, "byte-identical reruns and exact checkpoint restart", check);
    }

    if (failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
