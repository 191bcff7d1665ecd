#ifndef CHEMODG_FESPACE_HPP
#define CHEMODG_FESPACE_HPP

#include <functional>
#include <memory>

#include "chemodg/fields.hpp"
#include "chemodg/linalg.hpp"

namespace chemodg {

using PointFunction = std::function<double(const Vec3&)>;

SparseMatrix p1_mass_matrix(const Mesh& mesh);

// Row sums of the consistent P1 mass matrix (trapezoidal/vertex rule).
std::vector<double> p1_lumped_mass(const Mesh& mesh);

SparseMatrix p1_stiffness_matrix(const Mesh& mesh);
SparseMatrix p1_stiffness_matrix(const Mesh& mesh, const DGField& coefficient);

// Gradients of the barycentric basis functions of element k.
void p1_basis_gradients(const Mesh& mesh, int k, Vec3* grads);

// L2 projections onto continuous P1: consistent mass matrix (pi1) and
// mass-lumped variant (pih1, sign preserving). pi1 solves with CG to a
// 1e-12 relative residual.
CGField project_pi1(const DGField& g);
CGField project_pi1(const CGField& g);
CGField project_pi1(std::shared_ptr<const Mesh> mesh, const PointFunction& g);

CGField project_pih1(const DGField& g);
CGField project_pih1(const CGField& g);
CGField project_pih1(std::shared_ptr<const Mesh> mesh, const PointFunction& g);

ElementGradientField element_gradients(const CGField& f);

// Elementwise log(u_K + eps). Values below -1e-12 raise an Error; tiny
// negatives from solver roundoff are clamped to zero.
DGField reg_log(const DGField& u, double eps);

// Elementwise average via a degree-2 quadrature rule (edge midpoints in 2D).
DGField dg_from_function(std::shared_ptr<const Mesh> mesh, const PointFunction& g);
// Vertex interpolation.
CGField cg_from_function(std::shared_ptr<const Mesh> mesh, const PointFunction& g);

double dg_integral(const DGField& u);
double dg_power_integral(const DGField& u, double p);  // integral of u^p (0^0 := 1)
double cg_lumped_integral(const CGField& v);

double dg_min(const DGField& u);
double dg_max(const DGField& u);
double cg_min(const CGField& v);

// Assembled-once operators shared by the per-step solvers.
struct P1Operators {
    std::shared_ptr<const Mesh> mesh;
    SparseMatrix mass;
    std::vector<double> lumped_mass;
    SparseMatrix stiffness;
    MeshQualityReport quality;
};

P1Operators build_p1_operators(std::shared_ptr<const Mesh> mesh);

// Projections against prebuilt operators (used in the time loop).
CGField project_pi1(const P1Operators& ops, const DGField& g);
CGField project_pih1(const P1Operators& ops, const DGField& g);

}  // namespace chemodg

#endif
