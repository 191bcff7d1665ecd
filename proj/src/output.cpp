#include "chemodg/output.hpp"

#include <fstream>
#include <sstream>

#include "chemodg/fespace.hpp"
#include "chemodg/mesh_io.hpp"
#include "chemodg/numfmt.hpp"

namespace chemodg {

namespace {

void write_data_array(std::ostream& out, const std::string& name,
                      const std::vector<double>& values) {
    out << "        <DataArray type=\"Float64\" Name=\"" << name
        << "\" format=\"ascii\">\n          ";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out << " ";
        out << format_double(values[i]);
    }
    out << "\n        </DataArray>\n";
}

}  // namespace

void write_vtu(const SimState& state, const std::string& path) {
    const Mesh& mesh = *state.u.mesh;
    std::ofstream out(path);
    if (!out) throw Error("write_vtu: cannot open " + path);

    CGField u_p1h = project_pih1(state.u);

    const int nv = mesh.num_vertices();
    const int ne = mesh.num_elements();
    const int nve = mesh.vertices_per_element();
    const int cell_type = mesh.dim == 2 ? 5 : 10;  // VTK triangle / tetra

    out << "<?xml version=\"1.0\"?>\n";
    out << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" byte_order=\"LittleEndian\">\n";
    out << "  <UnstructuredGrid>\n";
    out << "    <Piece NumberOfPoints=\"" << nv << "\" NumberOfCells=\"" << ne << "\">\n";
    out << "      <Points>\n";
    out << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" format=\"ascii\">\n";
    for (const Vec3& p : mesh.vertices)
        out << "          " << format_double(p.x) << " " << format_double(p.y) << " "
            << format_double(p.z) << "\n";
    out << "        </DataArray>\n";
    out << "      </Points>\n";
    out << "      <Cells>\n";
    out << "        <DataArray type=\"Int64\" Name=\"connectivity\" format=\"ascii\">\n";
    for (const auto& el : mesh.elements) {
        out << "         ";
        for (int i = 0; i < nve; ++i) out << " " << el[i];
        out << "\n";
    }
    out << "        </DataArray>\n";
    out << "        <DataArray type=\"Int64\" Name=\"offsets\" format=\"ascii\">\n          ";
    for (int k = 1; k <= ne; ++k) out << (k > 1 ? " " : "") << k * nve;
    out << "\n        </DataArray>\n";
    out << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n          ";
    for (int k = 0; k < ne; ++k) out << (k ? " " : "") << cell_type;
    out << "\n        </DataArray>\n";
    out << "      </Cells>\n";
    out << "      <CellData Scalars=\"u\">\n";
    write_data_array(out, "u", state.u.values);
    out << "      </CellData>\n";
    out << "      <PointData Scalars=\"u_p1h\">\n";
    write_data_array(out, "u_p1h", u_p1h.values);
    write_data_array(out, "v", state.v.values);
    write_data_array(out, "w", state.w.values);
    out << "      </PointData>\n";
    out << "    </Piece>\n";
    out << "  </UnstructuredGrid>\n";
    out << "</VTKFile>\n";
    if (!out) throw Error("write_vtu: write failed for " + path);
}

std::string diagnostics_csv_string(const std::vector<DiagnosticsRow>& table) {
    std::ostringstream os;
    os << "t,mass,min_u,max_u,mass_bound_rhs,int_v,int_w,fallback_used,fp_iterations\n";
    for (const DiagnosticsRow& r : table) {
        os << format_double(r.t) << "," << format_double(r.mass) << ","
           << format_double(r.min_u) << "," << format_double(r.max_u) << ","
           << format_double(r.mass_bound_rhs) << "," << format_double(r.int_v) << ","
           << format_double(r.int_w) << "," << (r.fallback_used ? 1 : 0) << ","
           << r.fp_iterations << "\n";
    }
    return os.str();
}

void write_diagnostics_csv(const std::vector<DiagnosticsRow>& table, const std::string& path) {
    if (table.empty()) throw Error("write_diagnostics_csv: empty table");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_diagnostics_csv: cannot open " + path);
    out << diagnostics_csv_string(table);
    if (!out) throw Error("write_diagnostics_csv: write failed for " + path);
}

std::vector<DiagnosticsRow> read_diagnostics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_diagnostics_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty diagnostics file");
    std::vector<DiagnosticsRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream is(line);
        std::string tok;
        while (std::getline(is, tok, ',')) fields.push_back(tok);
        if (fields.size() != 9)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 9 fields");
        DiagnosticsRow r;
        long long iv = 0;
        bool ok = parse_double(fields[0], &r.t) && parse_double(fields[1], &r.mass) &&
                  parse_double(fields[2], &r.min_u) && parse_double(fields[3], &r.max_u) &&
                  parse_double(fields[4], &r.mass_bound_rhs) &&
                  parse_double(fields[5], &r.int_v) && parse_double(fields[6], &r.int_w);
        ok = ok && parse_int(fields[7], &iv);
        r.fallback_used = iv != 0;
        ok = ok && parse_int(fields[8], &iv);
        r.fp_iterations = static_cast<int>(iv);
        if (!ok) throw ParseError(path + ":" + std::to_string(line_no) + ": bad field");
        rows.push_back(r);
    }
    return rows;
}

}  // namespace chemodg
