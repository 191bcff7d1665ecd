#include "chemodg/fespace.hpp"

#include <algorithm>
#include <cmath>

namespace chemodg {

namespace {

constexpr double kPi1Tol = 1e-12;

// Load vector b_i = integral of g * phi_i for P0 data g; exact since both
// factors are polynomial per element.
std::vector<double> p1_load_from_dg(const DGField& g) {
    const Mesh& mesh = *g.mesh;
    const int nve = mesh.vertices_per_element();
    std::vector<double> b(mesh.num_vertices(), 0.0);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        double w = g.values[k] * mesh.element_measures[k] / nve;
        for (int i = 0; i < nve; ++i) b[mesh.elements[k][i]] += w;
    }
    return b;
}

// Degree-2 quadrature: edge midpoints in 2D, the symmetric 4-point rule in 3D.
struct QuadPoint {
    Vec3 point;
    std::array<double, 4> basis;  // P1 basis values at the point
};

std::vector<QuadPoint> element_quadrature(const Mesh& mesh, int k) {
    const auto& el = mesh.elements[k];
    std::vector<QuadPoint> pts;
    if (mesh.dim == 2) {
        const Vec3& a = mesh.vertices[el[0]];
        const Vec3& b = mesh.vertices[el[1]];
        const Vec3& c = mesh.vertices[el[2]];
        pts.push_back({0.5 * (a + b), {0.5, 0.5, 0.0, 0.0}});
        pts.push_back({0.5 * (b + c), {0.0, 0.5, 0.5, 0.0}});
        pts.push_back({0.5 * (a + c), {0.5, 0.0, 0.5, 0.0}});
    } else {
        const double alpha = 0.5854101966249685;  // (5 + 3*sqrt(5)) / 20
        const double beta = 0.1381966011250105;   // (5 - sqrt(5)) / 20
        for (int i = 0; i < 4; ++i) {
            std::array<double, 4> lambda{beta, beta, beta, beta};
            lambda[i] = alpha;
            Vec3 p{0, 0, 0};
            for (int v = 0; v < 4; ++v) p = p + lambda[v] * mesh.vertices[el[v]];
            pts.push_back({p, lambda});
        }
    }
    return pts;
}

std::vector<double> p1_load_from_function(const Mesh& mesh, const PointFunction& g) {
    const int nve = mesh.vertices_per_element();
    std::vector<double> b(mesh.num_vertices(), 0.0);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        auto pts = element_quadrature(mesh, k);
        double w = mesh.element_measures[k] / static_cast<double>(pts.size());
        for (const auto& qp : pts) {
            double gv = g(qp.point);
            for (int i = 0; i < nve; ++i) b[mesh.elements[k][i]] += w * gv * qp.basis[i];
        }
    }
    return b;
}

CGField solve_pi1(std::shared_ptr<const Mesh> mesh, const SparseMatrix& M,
                  const std::vector<double>& b) {
    auto res = solve_spd(M, b, kPi1Tol, 10 * std::max(1, static_cast<int>(b.size())));
    if (!res.report.converged)
        throw Error("project_pi1: mass solve did not converge");
    return CGField(std::move(mesh), std::move(res.x));
}

CGField solve_pih1(std::shared_ptr<const Mesh> mesh, const std::vector<double>& lumped,
                   const std::vector<double>& b) {
    std::vector<double> x(b.size());
    for (size_t i = 0; i < b.size(); ++i) x[i] = b[i] / lumped[i];
    return CGField(std::move(mesh), std::move(x));
}

}  // namespace

SparseMatrix p1_mass_matrix(const Mesh& mesh) {
    const int nve = mesh.vertices_per_element();
    // Local matrix |K|/c * (1 + delta_ij): c = 12 for triangles, 20 for tets.
    const double denom = mesh.dim == 2 ? 12.0 : 20.0;
    std::vector<Triplet> t;
    t.reserve(mesh.num_elements() * nve * nve);
    for (int k = 0; k < mesh.num_elements(); ++k) {
        double base = mesh.element_measures[k] / denom;
        for (int i = 0; i < nve; ++i)
            for (int j = 0; j < nve; ++j)
                t.push_back({mesh.elements[k][i], mesh.elements[k][j],
                             base * (i == j ? 2.0 : 1.0)});
    }
    return SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(t));
}

std::vector<double> p1_lumped_mass(const Mesh& mesh) {
    // Row sums of the consistent matrix, so the two agree bit-exactly.
    SparseMatrix M = p1_mass_matrix(mesh);
    std::vector<double> d(mesh.num_vertices(), 0.0);
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        double s = 0.0;
        for (int k = M.row_offsets()[i]; k < M.row_offsets()[i + 1]; ++k) s += M.values()[k];
        d[i] = s;
    }
    return d;
}

void p1_basis_gradients(const Mesh& mesh, int k, Vec3* grads) {
    const auto& el = mesh.elements[k];
    const Vec3& p0 = mesh.vertices[el[0]];
    if (mesh.dim == 2) {
        Vec3 e1 = mesh.vertices[el[1]] - p0;
        Vec3 e2 = mesh.vertices[el[2]] - p0;
        double det = e1.x * e2.y - e1.y * e2.x;
        // Rows of the inverse Jacobian transpose.
        grads[1] = {e2.y / det, -e2.x / det, 0.0};
        grads[2] = {-e1.y / det, e1.x / det, 0.0};
        grads[0] = -(grads[1] + grads[2]);
    } else {
        Vec3 e1 = mesh.vertices[el[1]] - p0;
        Vec3 e2 = mesh.vertices[el[2]] - p0;
        Vec3 e3 = mesh.vertices[el[3]] - p0;
        double det = dot(e1, cross(e2, e3));
        Vec3 c23 = cross(e2, e3);
        Vec3 c31 = cross(e3, e1);
        Vec3 c12 = cross(e1, e2);
        grads[1] = (1.0 / det) * c23;
        grads[2] = (1.0 / det) * c31;
        grads[3] = (1.0 / det) * c12;
        grads[0] = -(grads[1] + (grads[2] + grads[3]));
    }
}

SparseMatrix p1_stiffness_matrix(const Mesh& mesh) {
    const int nve = mesh.vertices_per_element();
    std::vector<Triplet> t;
    t.reserve(mesh.num_elements() * nve * nve);
    Vec3 grads[4];
    for (int k = 0; k < mesh.num_elements(); ++k) {
        p1_basis_gradients(mesh, k, grads);
        for (int i = 0; i < nve; ++i)
            for (int j = 0; j < nve; ++j)
                t.push_back({mesh.elements[k][i], mesh.elements[k][j],
                             mesh.element_measures[k] * dot(grads[i], grads[j])});
    }
    return SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(t));
}

SparseMatrix p1_stiffness_matrix(const Mesh& mesh, const DGField& coefficient) {
    const int nve = mesh.vertices_per_element();
    for (double c : coefficient.values)
        if (c < 0.0) throw Error("p1_stiffness_matrix: coefficient must be nonnegative");
    std::vector<Triplet> t;
    t.reserve(mesh.num_elements() * nve * nve);
    Vec3 grads[4];
    for (int k = 0; k < mesh.num_elements(); ++k) {
        p1_basis_gradients(mesh, k, grads);
        double w = coefficient.values[k] * mesh.element_measures[k];
        for (int i = 0; i < nve; ++i)
            for (int j = 0; j < nve; ++j)
                t.push_back({mesh.elements[k][i], mesh.elements[k][j], w * dot(grads[i], grads[j])});
    }
    return SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(t));
}

CGField project_pi1(const DGField& g) {
    SparseMatrix M = p1_mass_matrix(*g.mesh);
    return solve_pi1(g.mesh, M, p1_load_from_dg(g));
}

CGField project_pi1(const CGField& g) {
    SparseMatrix M = p1_mass_matrix(*g.mesh);
    return solve_pi1(g.mesh, M, M.multiply(g.values));
}

CGField project_pi1(std::shared_ptr<const Mesh> mesh, const PointFunction& g) {
    SparseMatrix M = p1_mass_matrix(*mesh);
    std::vector<double> b = p1_load_from_function(*mesh, g);
    return solve_pi1(std::move(mesh), M, b);
}

CGField project_pih1(const DGField& g) {
    return solve_pih1(g.mesh, p1_lumped_mass(*g.mesh), p1_load_from_dg(g));
}

CGField project_pih1(const CGField& g) {
    SparseMatrix M = p1_mass_matrix(*g.mesh);
    return solve_pih1(g.mesh, p1_lumped_mass(*g.mesh), M.multiply(g.values));
}

CGField project_pih1(std::shared_ptr<const Mesh> mesh, const PointFunction& g) {
    std::vector<double> lumped = p1_lumped_mass(*mesh);
    std::vector<double> b = p1_load_from_function(*mesh, g);
    return solve_pih1(std::move(mesh), lumped, b);
}

CGField project_pi1(const P1Operators& ops, const DGField& g) {
    return solve_pi1(ops.mesh, ops.mass, p1_load_from_dg(g));
}

CGField project_pih1(const P1Operators& ops, const DGField& g) {
    return solve_pih1(ops.mesh, ops.lumped_mass, p1_load_from_dg(g));
}

ElementGradientField element_gradients(const CGField& f) {
    const Mesh& mesh = *f.mesh;
    ElementGradientField out;
    out.mesh = f.mesh;
    out.vectors.resize(mesh.num_elements());
    const int nve = mesh.vertices_per_element();
    Vec3 grads[4];
    for (int k = 0; k < mesh.num_elements(); ++k) {
        p1_basis_gradients(mesh, k, grads);
        Vec3 g{0, 0, 0};
        for (int i = 0; i < nve; ++i) g = g + f.values[mesh.elements[k][i]] * grads[i];
        out.vectors[k] = g;
    }
    return out;
}

DGField reg_log(const DGField& u, double eps) {
    if (!(eps > 0.0)) throw Error("reg_log: eps must be positive");
    DGField out(u.mesh);
    for (size_t k = 0; k < u.values.size(); ++k) {
        double v = u.values[k];
        if (v < -1e-12) throw Error("reg_log: negative cell density");
        out.values[k] = std::log(std::max(v, 0.0) + eps);
    }
    return out;
}

DGField dg_from_function(std::shared_ptr<const Mesh> mesh, const PointFunction& g) {
    DGField out(mesh);
    for (int k = 0; k < mesh->num_elements(); ++k) {
        auto pts = element_quadrature(*mesh, k);
        double s = 0.0;
        for (const auto& qp : pts) s += g(qp.point);
        out.values[k] = s / static_cast<double>(pts.size());
    }
    return out;
}

CGField cg_from_function(std::shared_ptr<const Mesh> mesh, const PointFunction& g) {
    CGField out(mesh);
    for (int i = 0; i < mesh->num_vertices(); ++i) out.values[i] = g(mesh->vertices[i]);
    return out;
}

double dg_integral(const DGField& u) {
    long double s = 0.0L;
    for (size_t k = 0; k < u.values.size(); ++k)
        s += static_cast<long double>(u.mesh->element_measures[k]) * u.values[k];
    return static_cast<double>(s);
}

double dg_power_integral(const DGField& u, double p) {
    long double s = 0.0L;
    for (size_t k = 0; k < u.values.size(); ++k) {
        double v = u.values[k];
        double vp = p == 0.0 ? 1.0 : std::pow(std::max(v, 0.0), p);
        s += static_cast<long double>(u.mesh->element_measures[k]) * vp;
    }
    return static_cast<double>(s);
}

double cg_lumped_integral(const CGField& v) {
    std::vector<double> d = p1_lumped_mass(*v.mesh);
    long double s = 0.0L;
    for (size_t i = 0; i < v.values.size(); ++i)
        s += static_cast<long double>(d[i]) * v.values[i];
    return static_cast<double>(s);
}

double dg_min(const DGField& u) { return *std::min_element(u.values.begin(), u.values.end()); }
double dg_max(const DGField& u) { return *std::max_element(u.values.begin(), u.values.end()); }
double cg_min(const CGField& v) { return *std::min_element(v.values.begin(), v.values.end()); }

P1Operators build_p1_operators(std::shared_ptr<const Mesh> mesh) {
    P1Operators ops;
    ops.mesh = mesh;
    ops.mass = p1_mass_matrix(*mesh);
    ops.lumped_mass = p1_lumped_mass(*mesh);
    ops.stiffness = p1_stiffness_matrix(*mesh);
    ops.quality = quality_report(*mesh);
    return ops;
}

}  // namespace chemodg
