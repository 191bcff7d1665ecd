#ifndef CHEMODG_MESH_HPP
#define CHEMODG_MESH_HPP

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemodg/geometry.hpp"

namespace chemodg {

// Base error type of the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A runtime check tied to a discrete property failed (positivity, mass bound, ...).
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& what) : Error(what) {}
};

// Facet shared by two elements. The unit normal points out of element_k
// into element_l, and element_k is always the element with the smaller
// index, which fixes the mesh orientation deterministically.
struct InteriorFacet {
    std::array<int, 3> vertices{-1, -1, -1};  // sorted ascending; [2] = -1 in 2D
    int element_k = -1;
    int element_l = -1;
    Vec3 normal;
    double measure = 0.0;  // length in 2D, area in 3D
};

struct BoundaryFacet {
    std::array<int, 3> vertices{-1, -1, -1};
    int element = -1;
    Vec3 normal;  // outward unit normal of the domain
    double measure = 0.0;
};

struct MeshQualityReport {
    double max_angle = 0.0;  // radians; largest triangle angle (2D) or dihedral angle (3D)
    bool is_non_obtuse = false;
    double h = 0.0;                        // maximum element diameter
    double shape_regularity_ratio = 0.0;   // max over elements of diameter / inradius
};

// Immutable oriented simplicial mesh: triangles (dim 2) or tetrahedra (dim 3).
// Construct through build_mesh or one of the generators; never mutate after.
struct Mesh {
    int dim = 2;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> elements;  // [3] = -1 in 2D
    std::vector<double> element_measures;
    std::vector<InteriorFacet> interior_facets;
    std::vector<BoundaryFacet> boundary_facets;
    double domain_measure = 0.0;  // sum of element measures

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }
    int vertices_per_element() const { return dim + 1; }

    Vec3 element_centroid(int k) const;
    double element_diameter(int k) const;
};

// Builds the facet lists, measures and orientation from raw arrays.
// vertices: nv points (z ignored for dim 2); connectivity: ne tuples of
// dim+1 vertex indices. Throws Error on degenerate elements, out-of-range
// indices or non-manifold facets.
std::shared_ptr<const Mesh> build_mesh(int dim,
                                       const std::vector<Vec3>& vertices,
                                       const std::vector<std::array<int, 4>>& connectivity);

MeshQualityReport quality_report(const Mesh& mesh);

}  // namespace chemodg

#endif
