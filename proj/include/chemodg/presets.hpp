#ifndef CHEMODG_PRESETS_HPP
#define CHEMODG_PRESETS_HPP

#include <string>
#include <vector>

#include "chemodg/fields.hpp"
#include "chemodg/params.hpp"

namespace chemodg {

struct MeshSpec {
    enum class Kind { Disk, Ball, File } kind = Kind::Disk;
    double radius = 1.0;
    double target_h = 5e-2;
    std::string path;  // Kind::File
    std::string format = "gmsh-msh-v2";
};

// Radial profile A * exp(-decay * r^2) centered at the origin.
struct RadialGaussian {
    double amplitude = 0.0;
    double decay = 35.0;

    double operator()(const Vec3& p) const {
        return amplitude * std::exp(-decay * dot(p, p));
    }
};

struct Preset {
    std::string name;
    std::string description;
    ModelParams params;
    MeshSpec mesh;
    RadialGaussian u0;
    RadialGaussian v0;
    RadialGaussian w0;
};

Preset preset(const std::string& name);
std::vector<std::string> preset_names();

std::shared_ptr<const Mesh> build_preset_mesh(const MeshSpec& spec);

struct InitialData {
    DGField u0;
    CGField v0;
    CGField w0;
};

// u0 by elementwise averaging, signals by vertex interpolation.
InitialData build_initial_data(std::shared_ptr<const Mesh> mesh, const Preset& preset);

}  // namespace chemodg

#endif
