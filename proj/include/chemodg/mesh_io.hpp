#ifndef CHEMODG_MESH_IO_HPP
#define CHEMODG_MESH_IO_HPP

#include <memory>
#include <string>

#include "chemodg/mesh.hpp"

namespace chemodg {

// File parsing failed; the message carries the file name and line number.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

enum class MeshFormat {
    NativeText,  // "dim nv ne" header, nv coordinate lines, ne 0-based connectivity lines
    GmshMshV2,   // Gmsh MSH 2.2 ASCII, line/triangle/tetrahedron elements only
};

MeshFormat mesh_format_from_string(const std::string& name);

std::shared_ptr<const Mesh> load_mesh(const std::string& path, MeshFormat format);

// Writes the native text format (exact float round-trip).
void save_mesh_native(const Mesh& mesh, const std::string& path);

}  // namespace chemodg

#endif
