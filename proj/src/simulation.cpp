#include "chemodg/simulation.hpp"

#include <cmath>
#include <sstream>

#include "chemodg/scalar.hpp"

namespace chemodg {

namespace {

double lumped_integral(const P1Operators& ops, const CGField& f) {
    long double s = 0.0L;
    for (size_t i = 0; i < f.values.size(); ++i)
        s += static_cast<long double>(ops.lumped_mass[i]) * f.values[i];
    return static_cast<double>(s);
}

DiagnosticsRow make_row(const P1Operators& ops, const SimState& state,
                        const ModelParams& params, bool fallback, int fp_iters) {
    DiagnosticsRow row;
    row.t = state.t;
    row.mass = dg_integral(state.u);
    row.min_u = dg_min(state.u);
    row.max_u = dg_max(state.u);
    row.mass_bound_rhs = row.mass + params.dt * params.lambda * dg_power_integral(state.u, params.rho);
    row.int_v = lumped_integral(ops, state.v);
    row.int_w = lumped_integral(ops, state.w);
    row.fallback_used = fallback;
    row.fp_iterations = fp_iters;
    return row;
}

}  // namespace

FallbackPolicy fallback_policy_from_string(const std::string& name) {
    if (name == "auto") return FallbackPolicy::Auto;
    if (name == "linear") return FallbackPolicy::LinearOnly;
    if (name == "truncated") return FallbackPolicy::TruncatedAlways;
    throw Error("unknown fallback policy: " + name + " (expected auto, linear or truncated)");
}

std::string to_string(FallbackPolicy policy) {
    switch (policy) {
        case FallbackPolicy::Auto: return "auto";
        case FallbackPolicy::LinearOnly: return "linear";
        case FallbackPolicy::TruncatedAlways: return "truncated";
    }
    return "auto";
}

std::string to_string(BlowUpClass c) {
    switch (c) {
        case BlowUpClass::Bounded: return "bounded";
        case BlowUpClass::BlowUp: return "blow-up";
        case BlowUpClass::Undecided: return "undecided";
    }
    return "undecided";
}

RunResult run(const ModelParams& params, const P1Operators& ops,
              const DGField& u0, const CGField& v0, const CGField& w0,
              const RunHooks& hooks, const RunOptions& options, int start_step) {
    params.validate_ranges();
    if (dg_min(u0) < -1e-12) throw Error("run: u0 must be nonnegative");
    const bool nonlocal = params.model == ModelKind::Nonlocal;
    const int tau = params.effective_tau();
    if (tau == 1 && (cg_min(v0) < -1e-12 || cg_min(w0) < -1e-12))
        throw Error("run: tau = 1 needs nonnegative initial signals v0, w0");

    const long long total_steps = std::llround(params.T / params.dt);
    if (start_step < 0 || start_step > total_steps)
        throw Error("run: start_step outside [0, T/dt]");

    RunResult result;
    result.state = SimState{start_step, start_step * params.dt, u0, v0, w0};

    auto record = [&](bool fallback, int fp_iters) {
        DiagnosticsRow row = make_row(ops, result.state, params, fallback, fp_iters);
        result.diagnostics.push_back(row);
        if (hooks.on_step) hooks.on_step(result.state, row);
    };
    record(false, 0);

    for (long long m = start_step; m < total_steps; ++m) {
        const DGField& u_prev = result.state.u;
        double prev_mass = result.diagnostics.back().mass;
        double prev_bound = result.diagnostics.back().mass_bound_rhs;

        CGField v_next, w_next;
        if (nonlocal) {
            v_next = step_signal_nonlocal(ops, u_prev, params.alpha, params.eta, options.signal).field;
            w_next = step_signal_nonlocal(ops, u_prev, params.beta, params.eta, options.signal).field;
        } else {
            v_next = step_signal_local(ops, u_prev, result.state.v, params.a, params.alpha,
                                       params.eta, tau, params.dt, options.signal)
                         .field;
            w_next = step_signal_local(ops, u_prev, result.state.w, params.d_decay, params.beta,
                                       params.eta, tau, params.dt, options.signal)
                         .field;
        }

        bool fallback = false;
        int fp_iters = 0;
        DGField u_next;
        if (options.policy == FallbackPolicy::TruncatedAlways) {
            auto trunc = step_cell_truncated(ops, u_prev, v_next, w_next, params, params.dt,
                                             options.cell);
            u_next = std::move(trunc.u);
            fp_iters = trunc.iterations;
            fallback = true;
        } else {
            auto lin = step_cell_linear(ops, u_prev, v_next, w_next, params, params.dt,
                                        options.cell);
            if (lin.min_u < options.fallback_trigger &&
                options.policy == FallbackPolicy::Auto) {
                auto trunc = step_cell_truncated(ops, u_prev, v_next, w_next, params,
                                                 params.dt, options.cell);
                u_next = std::move(trunc.u);
                fp_iters = trunc.iterations;
                fallback = true;
                ++result.fallback_count;
            } else {
                u_next = std::move(lin.u);
            }
        }

        result.state.u = std::move(u_next);
        result.state.v = std::move(v_next);
        result.state.w = std::move(w_next);
        result.state.step = static_cast<int>(m + 1);
        result.state.t = (m + 1) * params.dt;

        if (options.runtime_checks) {
            double min_u = dg_min(result.state.u);
            if (min_u < -1e-12 && options.policy != FallbackPolicy::LinearOnly) {
                std::ostringstream os;
                os << "run: positivity violated at step " << (m + 1) << " (min u = " << min_u << ")";
                throw InvariantViolation(os.str());
            }
            double mass = dg_integral(result.state.u);
            if (mass > prev_bound + 1e-10 * std::max(1.0, std::abs(prev_bound))) {
                std::ostringstream os;
                os << "run: mass bound violated at step " << (m + 1) << " (mass " << mass
                   << " > bound " << prev_bound << ")";
                throw InvariantViolation(os.str());
            }
            (void)prev_mass;
            if (nonlocal) {
                double scale_v = 0.0, scale_w = 0.0;
                for (double x : result.state.v.values) scale_v = std::max(scale_v, std::abs(x));
                for (double x : result.state.w.values) scale_w = std::max(scale_w, std::abs(x));
                double iv = lumped_integral(ops, result.state.v);
                double iw = lumped_integral(ops, result.state.w);
                if (std::abs(iv) > 1e-10 * std::max(1.0, scale_v) ||
                    std::abs(iw) > 1e-10 * std::max(1.0, scale_w))
                    throw InvariantViolation("run: nonlocal signal mean is not zero");
            }
        }

        record(fallback, fp_iters);
    }

    return result;
}

BlowUpVerdict classify_blowup(const std::vector<DiagnosticsRow>& diagnostics,
                              const BlowUpCriteria& criteria) {
    const int n = static_cast<int>(diagnostics.size());
    if (n < criteria.plateau_window)
        throw Error("classify_blowup: needs at least plateau_window rows");
    BlowUpVerdict verdict;
    double initial = diagnostics.front().max_u;
    double threshold = criteria.growth_factor * initial;
    for (const auto& row : diagnostics) verdict.peak = std::max(verdict.peak, row.max_u);

    int first_cross = -1;
    for (int i = 0; i < n; ++i)
        if (diagnostics[i].max_u >= threshold) {
            first_cross = i;
            break;
        }
    if (first_cross < 0) {
        verdict.classification = BlowUpClass::Bounded;
        return verdict;
    }
    // Find the first flat window after the threshold crossing.
    const int w = criteria.plateau_window;
    for (int start = first_cross; start + w <= n; ++start) {
        double lo = diagnostics[start].max_u, hi = lo;
        for (int i = start; i < start + w; ++i) {
            lo = std::min(lo, diagnostics[i].max_u);
            hi = std::max(hi, diagnostics[i].max_u);
        }
        if (hi <= 0.0) continue;
        if ((hi - lo) / hi <= criteria.plateau_rtol) {
            verdict.classification = BlowUpClass::BlowUp;
            verdict.t_detect = diagnostics[start].t;
            return verdict;
        }
    }
    verdict.classification = BlowUpClass::Undecided;
    return verdict;
}

}  // namespace chemodg
