#ifndef CHEMODG_SIGNALS_HPP
#define CHEMODG_SIGNALS_HPP

#include "chemodg/fespace.hpp"
#include "chemodg/params.hpp"

namespace chemodg {

struct SignalSolveOptions {
    double tol = 1e-12;
    int max_iter_factor = 10;  // max_iter = factor * n
};

struct SignalStep {
    CGField field;
    SolveReport report;
};

// Source evaluation f(s) = (s + eta)^exponent at the vertex values of the
// sign-preserving projection of u_prev, lumped with the vertex rule. This
// keeps the full right-hand side nonnegative, so on non-obtuse meshes the
// backward Euler / elliptic system is an M-matrix problem with nonnegative
// solution.
SignalStep step_signal_local(const P1Operators& ops, const DGField& u_prev,
                             const CGField& s_prev, double decay, double exponent,
                             double eta, int tau, double dt,
                             const SignalSolveOptions& opts = {});

// One backward Euler (tau = 1) or elliptic (tau = 0) solve with an explicit
// nodal source vector; used by the local step and by convergence studies.
SignalStep step_signal_system(const P1Operators& ops, const CGField& s_prev,
                              const std::vector<double>& nodal_source, double decay,
                              int tau, double dt, const SignalSolveOptions& opts = {});

// Mean-zero Poisson problem of the nonlocal model: the source is f(u_prev)
// minus its domain mean, and the output has zero lumped mean.
SignalStep step_signal_nonlocal(const P1Operators& ops, const DGField& u_prev,
                                double exponent, double eta,
                                const SignalSolveOptions& opts = {});

}  // namespace chemodg

#endif
