#ifndef CHEMODG_CELLDENSITY_HPP
#define CHEMODG_CELLDENSITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "chemodg/fespace.hpp"
#include "chemodg/params.hpp"

namespace chemodg {

// Transport velocity of one upwind term: the full per-element vector,
// coefficient and sign already applied.
struct UpwindVelocity {
    std::shared_ptr<const Mesh> mesh;
    std::vector<Vec3> per_element;
};

// Facet-based upwind operator: for every interior facet e = K|L with flux
// q = avg(beta) . n_e it adds |e| * (+q_plus at (K,K), -q_minus at (K,L),
// -q_plus at (L,K), +q_minus at (L,L)). Boundary facets carry no flux.
SparseMatrix assemble_upwind(const Mesh& mesh, const UpwindVelocity& beta);

// The three transport velocities of one time step, sharing the projected
// log gradient. diffusion = -(u+1)^(n1-1) grad tilde(log(u+eps)),
// attraction = +chi (u+1)^(n2-1) grad v, repulsion = -xi (u+1)^(n3-1) grad w.
struct StepVelocities {
    UpwindVelocity diffusion;
    UpwindVelocity attraction;
    UpwindVelocity repulsion;
    std::vector<double> log_gradient_norm;  // |grad Pi1 log(u_prev+eps)| per element
};

StepVelocities build_velocities(const P1Operators& ops, const DGField& u_prev,
                                const CGField& v_next, const CGField& w_next,
                                const ModelParams& params);

// Everything both cell solvers need for one step. With u_prev >= 0 the
// reaction diagonal is nonnegative and the upwind operator has nonnegative
// diagonal and nonpositive off-diagonal entries with a structurally
// symmetric pattern.
struct CellStepMatrices {
    SparseMatrix upwind;            // sum of the three velocity contributions
    std::vector<double> reaction;   // R_K = |K|(mu u^(k-1) + c u^(gamma-1) |g|^gamma)
    std::vector<double> lumped_p0;  // element measures |K|
    std::vector<double> rhs;        // |K|(u/dt + lambda u^rho)
};

CellStepMatrices assemble_cell_system(const P1Operators& ops, const DGField& u_prev,
                                      const CGField& v_next, const CGField& w_next,
                                      const ModelParams& params, double dt);

struct CellSolveOptions {
    double tol = 1e-13;
    int max_iter_factor = 10;
    double fp_tol = 1e-10;
    int fp_max_iter = 200;
};

struct CellStepResult {
    DGField u;
    SolveReport report;
    double min_u = 0.0;
};

// Implicit-explicit linear scheme; the solution is returned as solved,
// without clipping.
CellStepResult step_cell_linear(const P1Operators& ops, const DGField& u_prev,
                                const CGField& v_next, const CGField& w_next,
                                const ModelParams& params, double dt,
                                const CellSolveOptions& opts = {});

struct TruncatedStepResult {
    DGField u;
    int iterations = 0;
};

// The fixed-point iteration exceeded fp_max_iter; carries the last iterate.
struct FixedPointError : Error {
    FixedPointError(const std::string& what, DGField last, int iters)
        : Error(what), last_iterate(std::move(last)), iterations(iters) {}
    DGField last_iterate;
    int iterations = 0;
};

// Truncated scheme solved by fixed-point iteration on the explicit map of
// the existence proof: transport and reaction act on the positive part of
// the previous iterate. The converged solution is nonnegative; asserted
// within -1e-12.
TruncatedStepResult step_cell_truncated(const P1Operators& ops, const DGField& u_prev,
                                        const CGField& v_next, const CGField& w_next,
                                        const ModelParams& params, double dt,
                                        const CellSolveOptions& opts = {});

// Parameter diagnostics. Never blocks a run; the experiments deliberately
// explore violations.
struct ConditionReport {
    std::string name;
    bool satisfied = false;
    double margin = 0.0;      // positive when satisfied
    std::string detail;
    bool exact = false;       // threshold below is an exact rational
    long long threshold_num = 0;
    long long threshold_den = 1;
    double threshold = 0.0;
};

struct ValidateOptions {
    std::optional<double> initial_mass;
    std::optional<double> domain_measure;
};

std::vector<ConditionReport> validate_params(const ModelParams& params, int dim,
                                             const ValidateOptions& opts = {});

}  // namespace chemodg

#endif
