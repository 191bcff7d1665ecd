#include "chemodg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace chemodg {

namespace {

double simplex_measure(int dim, const Mesh& mesh, const std::array<int, 4>& el) {
    const Vec3& p0 = mesh.vertices[el[0]];
    if (dim == 2) {
        Vec3 a = mesh.vertices[el[1]] - p0;
        Vec3 b = mesh.vertices[el[2]] - p0;
        return 0.5 * std::abs(a.x * b.y - a.y * b.x);
    }
    Vec3 a = mesh.vertices[el[1]] - p0;
    Vec3 b = mesh.vertices[el[2]] - p0;
    Vec3 c = mesh.vertices[el[3]] - p0;
    return std::abs(dot(a, cross(b, c))) / 6.0;
}

// Unit normal of a facet given by its vertices; sign not yet fixed.
Vec3 facet_normal_unoriented(int dim, const Mesh& mesh, const std::array<int, 3>& fv,
                             double* measure) {
    if (dim == 2) {
        Vec3 t = mesh.vertices[fv[1]] - mesh.vertices[fv[0]];
        double len = norm(t);
        *measure = len;
        return {t.y / len, -t.x / len, 0.0};
    }
    Vec3 a = mesh.vertices[fv[1]] - mesh.vertices[fv[0]];
    Vec3 b = mesh.vertices[fv[2]] - mesh.vertices[fv[0]];
    Vec3 n = cross(a, b);
    double doubled = norm(n);
    *measure = 0.5 * doubled;
    return (1.0 / doubled) * n;
}

Vec3 facet_centroid(int dim, const Mesh& mesh, const std::array<int, 3>& fv) {
    Vec3 c = mesh.vertices[fv[0]] + mesh.vertices[fv[1]];
    if (dim == 3) {
        c = c + mesh.vertices[fv[2]];
        return (1.0 / 3.0) * c;
    }
    return 0.5 * c;
}

}  // namespace

Vec3 Mesh::element_centroid(int k) const {
    Vec3 c;
    const int nve = vertices_per_element();
    for (int i = 0; i < nve; ++i) c = c + vertices[elements[k][i]];
    return (1.0 / nve) * c;
}

double Mesh::element_diameter(int k) const {
    const int nve = vertices_per_element();
    double d = 0.0;
    for (int i = 0; i < nve; ++i)
        for (int j = i + 1; j < nve; ++j)
            d = std::max(d, norm(vertices[elements[k][i]] - vertices[elements[k][j]]));
    return d;
}

std::shared_ptr<const Mesh> build_mesh(int dim,
                                       const std::vector<Vec3>& vertices,
                                       const std::vector<std::array<int, 4>>& connectivity) {
    if (dim != 2 && dim != 3) throw Error("build_mesh: dim must be 2 or 3");
    auto mesh = std::make_shared<Mesh>();
    mesh->dim = dim;
    mesh->vertices = vertices;
    mesh->elements = connectivity;

    const int nv = mesh->num_vertices();
    const int ne = mesh->num_elements();
    const int nve = dim + 1;
    if (ne == 0) throw Error("build_mesh: empty connectivity");

    double max_extent = 0.0;
    for (const Vec3& p : vertices) max_extent = std::max({max_extent, std::abs(p.x), std::abs(p.y), std::abs(p.z)});

    mesh->element_measures.resize(ne);
    long double total = 0.0L;
    for (int k = 0; k < ne; ++k) {
        for (int i = 0; i < nve; ++i) {
            int v = mesh->elements[k][i];
            if (v < 0 || v >= nv) {
                std::ostringstream os;
                os << "build_mesh: element " << k << " has vertex index " << v << " out of range";
                throw Error(os.str());
            }
        }
        if (dim == 2) mesh->elements[k][3] = -1;
        double m = simplex_measure(dim, *mesh, mesh->elements[k]);
        double scale = std::pow(std::max(max_extent, 1e-30), dim);
        if (!(m > 1e-14 * scale)) {
            std::ostringstream os;
            os << "build_mesh: element " << k << " is degenerate (measure " << m << ")";
            throw Error(os.str());
        }
        mesh->element_measures[k] = m;
        total += m;
    }
    mesh->domain_measure = static_cast<double>(total);

    // Facet identity: sorted vertex tuple. Collect adjacency per facet.
    std::map<std::array<int, 3>, std::vector<int>> adjacency;
    const int facets_per_element = nve;  // each facet omits one vertex
    for (int k = 0; k < ne; ++k) {
        for (int skip = 0; skip < facets_per_element; ++skip) {
            std::array<int, 3> fv{-1, -1, -1};
            int idx = 0;
            for (int i = 0; i < nve; ++i)
                if (i != skip) fv[idx++] = mesh->elements[k][i];
            std::sort(fv.begin(), fv.begin() + dim);
            adjacency[fv].push_back(k);
        }
    }

    for (const auto& [fv, elems] : adjacency) {
        if (elems.size() > 2) {
            std::ostringstream os;
            os << "build_mesh: non-manifold facet (" << fv[0] << "," << fv[1];
            if (dim == 3) os << "," << fv[2];
            os << ") shared by " << elems.size() << " elements";
            throw Error(os.str());
        }
        double measure = 0.0;
        Vec3 n = facet_normal_unoriented(dim, *mesh, fv, &measure);
        Vec3 fc = facet_centroid(dim, *mesh, fv);
        if (elems.size() == 2) {
            InteriorFacet f;
            f.vertices = fv;
            f.element_k = std::min(elems[0], elems[1]);
            f.element_l = std::max(elems[0], elems[1]);
            f.measure = measure;
            // Orient from K toward L.
            Vec3 dir = mesh->element_centroid(f.element_l) - mesh->element_centroid(f.element_k);
            f.normal = dot(n, dir) >= 0.0 ? n : -n;
            mesh->interior_facets.push_back(f);
        } else {
            BoundaryFacet f;
            f.vertices = fv;
            f.element = elems[0];
            f.measure = measure;
            Vec3 dir = fc - mesh->element_centroid(f.element);
            f.normal = dot(n, dir) >= 0.0 ? n : -n;
            mesh->boundary_facets.push_back(f);
        }
    }

    return mesh;
}

MeshQualityReport quality_report(const Mesh& mesh) {
    MeshQualityReport rep;
    const int ne = mesh.num_elements();
    for (int k = 0; k < ne; ++k) {
        double diam = mesh.element_diameter(k);
        rep.h = std::max(rep.h, diam);
        if (mesh.dim == 2) {
            const auto& el = mesh.elements[k];
            double perimeter = 0.0;
            for (int i = 0; i < 3; ++i) {
                Vec3 a = mesh.vertices[el[(i + 1) % 3]] - mesh.vertices[el[i]];
                Vec3 b = mesh.vertices[el[(i + 2) % 3]] - mesh.vertices[el[i]];
                double c = dot(a, b) / (norm(a) * norm(b));
                c = std::clamp(c, -1.0, 1.0);
                rep.max_angle = std::max(rep.max_angle, std::acos(c));
                perimeter += norm(a);
            }
            double inradius = 2.0 * mesh.element_measures[k] / perimeter;
            rep.shape_regularity_ratio = std::max(rep.shape_regularity_ratio, diam / inradius);
        } else {
            // Dihedral angles: for each pair of faces, outward normals.
            const auto& el = mesh.elements[k];
            Vec3 centroid = mesh.element_centroid(k);
            std::array<Vec3, 4> face_normals;
            double face_area_sum = 0.0;
            for (int skip = 0; skip < 4; ++skip) {
                std::array<int, 3> fv;
                int idx = 0;
                for (int i = 0; i < 4; ++i)
                    if (i != skip) fv[idx++] = el[i];
                Vec3 a = mesh.vertices[fv[1]] - mesh.vertices[fv[0]];
                Vec3 b = mesh.vertices[fv[2]] - mesh.vertices[fv[0]];
                Vec3 n = cross(a, b);
                double area = 0.5 * norm(n);
                face_area_sum += area;
                n = (1.0 / norm(n)) * n;
                Vec3 fc = (1.0 / 3.0) * (mesh.vertices[fv[0]] + mesh.vertices[fv[1]] + mesh.vertices[fv[2]]);
                if (dot(n, fc - centroid) < 0.0) n = -n;
                face_normals[skip] = n;
            }
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    double c = std::clamp(dot(face_normals[i], face_normals[j]), -1.0, 1.0);
                    double dihedral = M_PI - std::acos(c);
                    rep.max_angle = std::max(rep.max_angle, dihedral);
                }
            double inradius = 3.0 * mesh.element_measures[k] / face_area_sum;
            rep.shape_regularity_ratio = std::max(rep.shape_regularity_ratio, diam / inradius);
        }
    }
    rep.is_non_obtuse = rep.max_angle <= M_PI / 2.0 + 1e-12;
    return rep;
}

}  // namespace chemodg
