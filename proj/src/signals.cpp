#include "chemodg/signals.hpp"

#include <cmath>

#include "chemodg/scalar.hpp"

namespace chemodg {

namespace {

std::vector<double> lumped_source_vector(const P1Operators& ops, const DGField& u_prev,
                                         double exponent, double eta) {
    CGField z = project_pih1(ops, u_prev);  // nonnegative when u_prev >= 0
    const int n = ops.mesh->num_vertices();
    std::vector<double> src(n);
    for (int i = 0; i < n; ++i) {
        double s = std::max(z.values[i], 0.0);
        src[i] = pow0(s + eta, exponent);
    }
    return src;
}

}  // namespace

SignalStep step_signal_system(const P1Operators& ops, const CGField& s_prev,
                              const std::vector<double>& nodal_source, double decay,
                              int tau, double dt, const SignalSolveOptions& opts) {
    const int n = ops.mesh->num_vertices();
    if (tau == 1 && !(dt > 0)) throw Error("step_signal_system: dt must be positive");
    if (tau == 0 && !(decay > 0))
        throw Error("step_signal_system: elliptic solve needs a positive decay rate");

    // System (tau/dt) D + K + decay D, rhs (tau/dt) D s_prev + D f.
    SparseMatrix A = ops.stiffness;
    double mass_coeff = (tau == 1 ? 1.0 / dt : 0.0) + decay;
    std::vector<double> diag(n);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = mass_coeff * ops.lumped_mass[i];
        rhs[i] = ops.lumped_mass[i] *
                 ((tau == 1 ? s_prev.values[i] / dt : 0.0) + nodal_source[i]);
    }
    A.add_to_diagonal(diag);

    auto res = solve_spd(A, rhs, opts.tol, opts.max_iter_factor * n);
    if (!res.report.converged) throw Error("step_signal_system: CG did not converge");
    return {CGField(ops.mesh, std::move(res.x)), res.report};
}

SignalStep step_signal_local(const P1Operators& ops, const DGField& u_prev,
                             const CGField& s_prev, double decay, double exponent,
                             double eta, int tau, double dt,
                             const SignalSolveOptions& opts) {
    if (dg_min(u_prev) < -1e-12)
        throw Error("step_signal_local: u_prev must be nonnegative");
    if (tau == 1 && ops.quality.is_non_obtuse) {
        // The M-matrix argument needs a nonnegative previous signal; on
        // obtuse meshes the guarantee is void anyway, so tiny undershoots
        // from earlier solves are let through there.
        double scale = 0.0;
        for (double v : s_prev.values) scale = std::max(scale, std::abs(v));
        if (cg_min(s_prev) < -1e-12 * std::max(1.0, scale))
            throw Error("step_signal_local: s_prev must be nonnegative for tau = 1");
    }
    std::vector<double> src = lumped_source_vector(ops, u_prev, exponent, eta);
    SignalStep out = step_signal_system(ops, s_prev, src, decay, tau, dt, opts);
    // Nonnegative rhs plus the M-matrix structure of the lumped system makes
    // the solution nonnegative on non-obtuse meshes.
    if (ops.quality.is_non_obtuse) {
        double scale = 0.0;
        for (double v : out.field.values) scale = std::max(scale, std::abs(v));
        if (cg_min(out.field) < -1e-12 * std::max(1.0, scale))
            throw InvariantViolation("step_signal_local: negative signal on a non-obtuse mesh");
    }
    return out;
}

SignalStep step_signal_nonlocal(const P1Operators& ops, const DGField& u_prev,
                                double exponent, double eta,
                                const SignalSolveOptions& opts) {
    if (dg_min(u_prev) < -1e-12)
        throw Error("step_signal_nonlocal: u_prev must be nonnegative");
    const int n = ops.mesh->num_vertices();
    std::vector<double> f = lumped_source_vector(ops, u_prev, exponent, eta);
    long double weighted = 0.0L, total = 0.0L;
    for (int i = 0; i < n; ++i) {
        weighted += static_cast<long double>(ops.lumped_mass[i]) * f[i];
        total += ops.lumped_mass[i];
    }
    double mean = static_cast<double>(weighted / total);
    std::vector<double> b(n);
    for (int i = 0; i < n; ++i) b[i] = ops.lumped_mass[i] * (f[i] - mean);

    auto res = solve_mean_zero_poisson(ops.stiffness, b, ops.lumped_mass, opts.tol,
                                       opts.max_iter_factor * n);
    if (!res.report.converged)
        throw Error("step_signal_nonlocal: Poisson solve did not converge");
    return {CGField(ops.mesh, std::move(res.x)), res.report};
}

}  // namespace chemodg
