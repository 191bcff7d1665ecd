#ifndef CHEMODG_OUTPUT_HPP
#define CHEMODG_OUTPUT_HPP

#include <string>
#include <vector>

#include "chemodg/simulation.hpp"

namespace chemodg {

// XML unstructured-grid file with ASCII data arrays: raw u as cell data,
// its sign-preserving P1 projection plus v and w as point data.
void write_vtu(const SimState& state, const std::string& path);

// One header row, one row per recorded step, shortest round-trip floats.
void write_diagnostics_csv(const std::vector<DiagnosticsRow>& table, const std::string& path);

std::string diagnostics_csv_string(const std::vector<DiagnosticsRow>& table);

std::vector<DiagnosticsRow> read_diagnostics_csv(const std::string& path);

}  // namespace chemodg

#endif
