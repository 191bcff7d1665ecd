#include "chemodg/mesh_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "chemodg/numfmt.hpp"

namespace chemodg {

namespace {

struct LineReader {
    std::ifstream in;
    std::string path;
    int line_no = 0;

    explicit LineReader(const std::string& p) : in(p), path(p) {
        if (!in) throw ParseError("cannot open mesh file: " + p);
    }

    bool next(std::string* line) {
        if (!std::getline(in, *line)) return false;
        ++line_no;
        if (!line->empty() && line->back() == '\r') line->pop_back();
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream os;
        os << path << ":" << line_no << ": " << what;
        throw ParseError(os.str());
    }

    std::string require(const std::string& what) {
        std::string line;
        if (!next(&line)) fail("unexpected end of file, expected " + what);
        return line;
    }
};

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::shared_ptr<const Mesh> load_native(const std::string& path) {
    LineReader r(path);
    auto header = split_ws(r.require("header 'dim nv ne'"));
    long long dim = 0, nv = 0, ne = 0;
    if (header.size() != 3 || !parse_int(header[0], &dim) || !parse_int(header[1], &nv) ||
        !parse_int(header[2], &ne))
        r.fail("malformed header, expected 'dim nv ne'");
    if (dim != 2 && dim != 3) r.fail("dim must be 2 or 3");
    std::vector<Vec3> verts(nv);
    for (long long i = 0; i < nv; ++i) {
        auto toks = split_ws(r.require("vertex coordinates"));
        if (toks.size() != static_cast<size_t>(dim)) r.fail("expected " + std::to_string(dim) + " coordinates");
        double x = 0, y = 0, z = 0;
        if (!parse_double(toks[0], &x) || !parse_double(toks[1], &y)) r.fail("bad coordinate");
        if (dim == 3 && !parse_double(toks[2], &z)) r.fail("bad coordinate");
        verts[i] = {x, y, z};
    }
    std::vector<std::array<int, 4>> elems(ne, {-1, -1, -1, -1});
    for (long long k = 0; k < ne; ++k) {
        auto toks = split_ws(r.require("element connectivity"));
        if (toks.size() != static_cast<size_t>(dim + 1))
            r.fail("expected " + std::to_string(dim + 1) + " vertex indices");
        for (int i = 0; i <= dim; ++i) {
            long long v = 0;
            if (!parse_int(toks[i], &v)) r.fail("bad vertex index");
            elems[k][i] = static_cast<int>(v);
        }
    }
    return build_mesh(static_cast<int>(dim), verts, elems);
}

std::shared_ptr<const Mesh> load_gmsh_v2(const std::string& path) {
    LineReader r(path);
    std::unordered_map<long long, int> node_index;
    std::vector<Vec3> verts;
    std::vector<std::array<int, 4>> triangles;
    std::vector<std::array<int, 4>> tets;
    bool saw_nodes = false, saw_elements = false;

    std::string line;
    while (r.next(&line)) {
        if (line == "$MeshFormat") {
            auto toks = split_ws(r.require("mesh format line"));
            double version = 0.0;
            if (toks.empty() || !parse_double(toks[0], &version)) r.fail("bad $MeshFormat line");
            if (version < 2.0 || version >= 3.0) r.fail("only MSH v2 ASCII is supported");
            if (toks.size() >= 2 && toks[1] != "0") r.fail("binary MSH files are not supported");
            if (r.require("$EndMeshFormat") != "$EndMeshFormat") r.fail("expected $EndMeshFormat");
        } else if (line == "$Nodes") {
            saw_nodes = true;
            long long count = 0;
            if (!parse_int(split_ws(r.require("node count")).at(0), &count)) r.fail("bad node count");
            verts.reserve(count);
            for (long long i = 0; i < count; ++i) {
                auto toks = split_ws(r.require("node line"));
                long long id = 0;
                double x = 0, y = 0, z = 0;
                if (toks.size() < 4 || !parse_int(toks[0], &id) || !parse_double(toks[1], &x) ||
                    !parse_double(toks[2], &y) || !parse_double(toks[3], &z))
                    r.fail("bad node line");
                node_index[id] = static_cast<int>(verts.size());
                verts.push_back({x, y, z});
            }
            if (r.require("$EndNodes") != "$EndNodes") r.fail("expected $EndNodes");
        } else if (line == "$Elements") {
            saw_elements = true;
            long long count = 0;
            if (!parse_int(split_ws(r.require("element count")).at(0), &count)) r.fail("bad element count");
            for (long long i = 0; i < count; ++i) {
                auto toks = split_ws(r.require("element line"));
                long long id = 0, type = 0, ntags = 0;
                if (toks.size() < 3 || !parse_int(toks[0], &id) || !parse_int(toks[1], &type) ||
                    !parse_int(toks[2], &ntags))
                    r.fail("bad element line");
                int nodes_needed;
                switch (type) {
                    case 1: nodes_needed = 2; break;  // line: boundary marker, skipped
                    case 2: nodes_needed = 3; break;  // triangle
                    case 4: nodes_needed = 4; break;  // tetrahedron
                    default:
                        r.fail("unsupported element type " + std::to_string(type) +
                               " (only 2-node lines, 3-node triangles, 4-node tetrahedra)");
                }
                if (toks.size() != static_cast<size_t>(3 + ntags + nodes_needed))
                    r.fail("element line has wrong token count");
                std::array<int, 4> conn{-1, -1, -1, -1};
                for (int v = 0; v < nodes_needed; ++v) {
                    long long nid = 0;
                    if (!parse_int(toks[3 + ntags + v], &nid)) r.fail("bad node reference");
                    auto it = node_index.find(nid);
                    if (it == node_index.end()) r.fail("element references unknown node " + std::to_string(nid));
                    conn[v] = it->second;
                }
                if (type == 2) triangles.push_back(conn);
                if (type == 4) tets.push_back(conn);
            }
            if (r.require("$EndElements") != "$EndElements") r.fail("expected $EndElements");
        } else if (!line.empty() && line[0] == '$') {
            // Unknown section: skip to its end marker.
            std::string end = "$End" + line.substr(1);
            std::string s;
            for (;;) {
                if (!r.next(&s)) r.fail("unterminated section " + line);
                if (s == end) break;
            }
        }
        // Blank lines between sections are permitted.
    }
    if (!saw_nodes || !saw_elements) {
        r.fail("missing $Nodes or $Elements section");
    }
    if (!tets.empty()) return build_mesh(3, verts, tets);
    if (triangles.empty()) r.fail("no triangles or tetrahedra found");
    for (const Vec3& p : verts)
        if (std::abs(p.z) > 1e-12) r.fail("triangle mesh has non-planar nodes (z != 0)");
    return build_mesh(2, verts, triangles);
}

}  // namespace

MeshFormat mesh_format_from_string(const std::string& name) {
    if (name == "native-text") return MeshFormat::NativeText;
    if (name == "gmsh-msh-v2") return MeshFormat::GmshMshV2;
    throw Error("unknown mesh format: " + name);
}

std::shared_ptr<const Mesh> load_mesh(const std::string& path, MeshFormat format) {
    switch (format) {
        case MeshFormat::NativeText: return load_native(path);
        case MeshFormat::GmshMshV2: return load_gmsh_v2(path);
    }
    throw Error("load_mesh: bad format enum");
}

void save_mesh_native(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << mesh.dim << " " << mesh.num_vertices() << " " << mesh.num_elements() << "\n";
    for (const Vec3& p : mesh.vertices) {
        out << format_double(p.x) << " " << format_double(p.y);
        if (mesh.dim == 3) out << " " << format_double(p.z);
        out << "\n";
    }
    for (const auto& el : mesh.elements) {
        out << el[0] << " " << el[1] << " " << el[2];
        if (mesh.dim == 3) out << " " << el[3];
        out << "\n";
    }
    if (!out) throw Error("write failed: " + path);
}

}  // namespace chemodg
