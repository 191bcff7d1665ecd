#include "chemodg/simulation.hpp"

#include <fstream>
#include <sstream>

#include "chemodg/numfmt.hpp"

namespace chemodg {

namespace {
constexpr const char* kMagic = "chemodg-checkpoint";
constexpr int kVersion = 1;
}  // namespace

void save_checkpoint(const SimState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("save_checkpoint: cannot open " + path);
    const Mesh& mesh = *state.u.mesh;
    out << kMagic << " " << kVersion << "\n";
    out << "dim " << mesh.dim << "\n";
    out << "step " << state.step << "\n";
    out << "nelem " << mesh.num_elements() << "\n";
    out << "nvert " << mesh.num_vertices() << "\n";
    out << "u";
    for (double v : state.u.values) out << " " << format_double(v);
    out << "\nv";
    for (double v : state.v.values) out << " " << format_double(v);
    out << "\nw";
    for (double v : state.w.values) out << " " << format_double(v);
    out << "\n";
    if (!out) throw Error("save_checkpoint: write failed for " + path);
}

SimState load_checkpoint(std::shared_ptr<const Mesh> mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("load_checkpoint: cannot open " + path);
    std::string line;
    auto fail = [&](const std::string& what) -> void {
        throw Error("load_checkpoint: " + path + ": " + what);
    };
    if (!std::getline(in, line)) fail("empty file");
    {
        std::istringstream is(line);
        std::string magic;
        int version = 0;
        is >> magic >> version;
        if (magic != kMagic) fail("not a checkpoint file");
        if (version != kVersion) fail("unsupported version " + std::to_string(version));
    }
    auto read_kv = [&](const std::string& key) -> long long {
        if (!std::getline(in, line)) fail("missing " + key);
        std::istringstream is(line);
        std::string k;
        long long v = 0;
        is >> k >> v;
        if (k != key) fail("expected " + key);
        return v;
    };
    int dim = static_cast<int>(read_kv("dim"));
    int step = static_cast<int>(read_kv("step"));
    long long nelem = read_kv("nelem");
    long long nvert = read_kv("nvert");
    if (dim != mesh->dim || nelem != mesh->num_elements() || nvert != mesh->num_vertices())
        fail("mesh does not match checkpoint dimensions");

    auto read_values = [&](const std::string& key, long long count) {
        if (!std::getline(in, line)) fail("missing " + key + " values");
        std::istringstream is(line);
        std::string k;
        is >> k;
        if (k != key) fail("expected " + key + " values");
        std::vector<double> vals;
        vals.reserve(count);
        std::string tok;
        while (is >> tok) {
            double v = 0.0;
            if (!parse_double(tok, &v)) fail("bad value in " + key);
            vals.push_back(v);
        }
        if (static_cast<long long>(vals.size()) != count) fail("wrong value count for " + key);
        return vals;
    };

    SimState state;
    state.step = step;
    state.u = DGField(mesh, read_values("u", nelem));
    state.v = CGField(mesh, read_values("v", nvert));
    state.w = CGField(mesh, read_values("w", nvert));
    return state;
}

}  // namespace chemodg
