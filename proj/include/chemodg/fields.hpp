#ifndef CHEMODG_FIELDS_HPP
#define CHEMODG_FIELDS_HPP

#include <memory>
#include <vector>

#include "chemodg/geometry.hpp"
#include "chemodg/mesh.hpp"

namespace chemodg {

// Piecewise-constant field: one value per element. Houses the cell density u.
struct DGField {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> values;

    DGField() = default;
    DGField(std::shared_ptr<const Mesh> m, double fill = 0.0)
        : mesh(std::move(m)), values(mesh->num_elements(), fill) {}
    DGField(std::shared_ptr<const Mesh> m, std::vector<double> v)
        : mesh(std::move(m)), values(std::move(v)) {
        if (static_cast<int>(values.size()) != mesh->num_elements())
            throw Error("DGField: value count != element count");
    }
};

// Continuous piecewise-linear field: one value per vertex. Houses v, w and
// the projected log term.
struct CGField {
    std::shared_ptr<const Mesh> mesh;
    std::vector<double> values;

    CGField() = default;
    CGField(std::shared_ptr<const Mesh> m, double fill = 0.0)
        : mesh(std::move(m)), values(mesh->num_vertices(), fill) {}
    CGField(std::shared_ptr<const Mesh> m, std::vector<double> v)
        : mesh(std::move(m)), values(std::move(v)) {
        if (static_cast<int>(values.size()) != mesh->num_vertices())
            throw Error("CGField: value count != vertex count");
    }
};

// Elementwise-constant gradient of a CGField.
struct ElementGradientField {
    std::shared_ptr<const Mesh> mesh;
    std::vector<Vec3> vectors;
};

}  // namespace chemodg

#endif
