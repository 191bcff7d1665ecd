#include "chemodg/celldensity.hpp"

#include <algorithm>
#include <cmath>

#include "chemodg/scalar.hpp"

namespace chemodg {

namespace {

// u_prev enters powers and logs; reject genuine negatives, flush roundoff.
std::vector<double> sanitized_density(const DGField& u_prev) {
    std::vector<double> u = u_prev.values;
    for (double& v : u) {
        if (v < -1e-12) throw Error("cell step: u_prev has negative entries");
        if (v < 0.0) v = 0.0;
    }
    return u;
}

}  // namespace

SparseMatrix assemble_upwind(const Mesh& mesh, const UpwindVelocity& beta) {
    const int ne = mesh.num_elements();
    if (static_cast<int>(beta.per_element.size()) != ne)
        throw Error("assemble_upwind: velocity size mismatch");
    std::vector<Triplet> t;
    t.reserve(4 * mesh.interior_facets.size());
    for (const InteriorFacet& f : mesh.interior_facets) {
        const int K = f.element_k;
        const int L = f.element_l;
        Vec3 avg = 0.5 * (beta.per_element[K] + beta.per_element[L]);
        double q = dot(avg, f.normal);
        double qp = positive_part(q) * f.measure;
        double qm = negative_part(q) * f.measure;
        t.push_back({K, K, qp});
        t.push_back({K, L, -qm});
        t.push_back({L, K, -qp});
        t.push_back({L, L, qm});
    }
    return SparseMatrix::from_triplets(ne, ne, std::move(t));
}

StepVelocities build_velocities(const P1Operators& ops, const DGField& u_prev,
                                const CGField& v_next, const CGField& w_next,
                                const ModelParams& params) {
    const Mesh& mesh = *ops.mesh;
    std::vector<double> u = sanitized_density(u_prev);

    CGField log_proj = project_pi1(ops, reg_log(u_prev, params.epsilon));
    ElementGradientField g_log = element_gradients(log_proj);
    ElementGradientField g_v = element_gradients(v_next);
    ElementGradientField g_w = element_gradients(w_next);

    StepVelocities out;
    out.diffusion.mesh = ops.mesh;
    out.attraction.mesh = ops.mesh;
    out.repulsion.mesh = ops.mesh;
    const int ne = mesh.num_elements();
    out.diffusion.per_element.resize(ne);
    out.attraction.per_element.resize(ne);
    out.repulsion.per_element.resize(ne);
    out.log_gradient_norm.resize(ne);
    for (int k = 0; k < ne; ++k) {
        double up1 = u[k] + 1.0;
        out.diffusion.per_element[k] = -pow0(up1, params.n1 - 1.0) * g_log.vectors[k];
        out.attraction.per_element[k] =
            (params.chi * pow0(up1, params.n2 - 1.0)) * g_v.vectors[k];
        out.repulsion.per_element[k] =
            -(params.xi * pow0(up1, params.n3 - 1.0)) * g_w.vectors[k];
        out.log_gradient_norm[k] = norm(g_log.vectors[k]);
    }
    return out;
}

CellStepMatrices assemble_cell_system(const P1Operators& ops, const DGField& u_prev,
                                      const CGField& v_next, const CGField& w_next,
                                      const ModelParams& params, double dt) {
    if (!(dt > 0)) throw Error("assemble_cell_system: dt must be positive");
    const Mesh& mesh = *ops.mesh;
    const int ne = mesh.num_elements();
    std::vector<double> u = sanitized_density(u_prev);

    StepVelocities vel = build_velocities(ops, u_prev, v_next, w_next, params);
    CellStepMatrices sys;
    sys.upwind = assemble_upwind(mesh, vel.diffusion)
                     .plus(assemble_upwind(mesh, vel.attraction))
                     .plus(assemble_upwind(mesh, vel.repulsion));
    sys.reaction.resize(ne);
    sys.lumped_p0 = mesh.element_measures;
    sys.rhs.resize(ne);
    for (int k = 0; k < ne; ++k) {
        double damping =
            params.c * pow0(u[k], params.gamma - 1.0) * std::pow(vel.log_gradient_norm[k], params.gamma);
        sys.reaction[k] = mesh.element_measures[k] * (params.mu * pow0(u[k], params.k - 1.0) + damping);
        sys.rhs[k] = mesh.element_measures[k] * (u[k] / dt + params.lambda * pow0(u[k], params.rho));
    }
    return sys;
}

CellStepResult step_cell_linear(const P1Operators& ops, const DGField& u_prev,
                                const CGField& v_next, const CGField& w_next,
                                const ModelParams& params, double dt,
                                const CellSolveOptions& opts) {
    const Mesh& mesh = *ops.mesh;
    CellStepMatrices sys = assemble_cell_system(ops, u_prev, v_next, w_next, params, dt);
    std::vector<double> diag = sys.reaction;
    for (int k = 0; k < mesh.num_elements(); ++k) diag[k] += sys.lumped_p0[k] / dt;
    SparseMatrix M = sys.upwind.plus(SparseMatrix::diagonal_matrix(diag));

    auto res = solve_general(M, sys.rhs, opts.tol, opts.max_iter_factor * mesh.num_elements());
    if (!res.report.converged)
        throw Error("step_cell_linear: linear solve did not converge");

    CellStepResult out{DGField(ops.mesh, std::move(res.x)), res.report, 0.0};
    out.min_u = dg_min(out.u);
    return out;
}

TruncatedStepResult step_cell_truncated(const P1Operators& ops, const DGField& u_prev,
                                        const CGField& v_next, const CGField& w_next,
                                        const ModelParams& params, double dt,
                                        const CellSolveOptions& opts) {
    const Mesh& mesh = *ops.mesh;
    const int ne = mesh.num_elements();
    std::vector<double> u_m = sanitized_density(u_prev);

    CellStepMatrices sys = assemble_cell_system(ops, u_prev, v_next, w_next, params, dt);
    const SparseMatrix& A = sys.upwind;
    const std::vector<double>& R = sys.reaction;
    std::vector<double> growth(ne);
    for (int k = 0; k < ne; ++k)
        growth[k] = u_m[k] + dt * params.lambda * pow0(u_m[k], params.rho);

    // Picard iteration on the explicit map: one diagonal (P0 mass) solve
    // per application, transport and reactions frozen at (iterate)_plus.
    // Accepted once the update is below tolerance and the iterate is
    // nonnegative within -1e-12; at the exact fixed point both hold.
    std::vector<double> iterate = u_m;
    std::vector<double> pos(ne), flux(ne), next(ne);
    int iters = 0;
    bool accepted = false;
    for (int j = 1; j <= opts.fp_max_iter; ++j) {
        double prev_max = 0.0;
        for (double v : iterate) prev_max = std::max(prev_max, std::abs(v));
        for (int k = 0; k < ne; ++k) pos[k] = positive_part(iterate[k]);
        A.multiply(pos, &flux);
        for (int k = 0; k < ne; ++k)
            next[k] = growth[k] - dt * (flux[k] + R[k] * pos[k]) / mesh.element_measures[k];
        double diff = 0.0, next_min = next[0];
        for (int k = 0; k < ne; ++k) {
            diff = std::max(diff, std::abs(next[k] - iterate[k]));
            next_min = std::min(next_min, next[k]);
        }
        iterate.swap(next);
        iters = j;
        if (diff <= opts.fp_tol * (1.0 + prev_max) && next_min >= -1e-12) {
            accepted = true;
            break;
        }
    }
    if (!accepted)
        throw FixedPointError("step_cell_truncated: fixed point did not converge",
                              DGField(ops.mesh, iterate), iters);

    TruncatedStepResult out{DGField(ops.mesh, std::move(iterate)), iters};
    if (dg_min(out.u) < -1e-12)
        throw InvariantViolation("step_cell_truncated: converged iterate is negative");
    return out;
}

}  // namespace chemodg
