#ifndef CHEMODG_CONFIG_HPP
#define CHEMODG_CONFIG_HPP

#include <optional>
#include <string>

#include "chemodg/presets.hpp"
#include "chemodg/simulation.hpp"

namespace chemodg {

// Complete description of one run: preset-based defaults plus overrides.
struct RunConfig {
    std::string preset_name = "test3-nonlocal-2d";
    ModelParams params;
    MeshSpec mesh;
    RunOptions solver;
    std::string output_directory = "out";
    int cadence = 50;        // VTU snapshot every this many steps
    bool write_vtu = true;

    // Fills params/mesh from the preset, then applies stored overrides.
    static RunConfig from_preset(const std::string& name);
};

// Flat INI-style text with sections [model], [mesh], [solver], [output].
// Unknown keys, bad types and out-of-range values raise ParseError with the
// offending key. CHEMODG_OUTPUT_DIR overrides the output directory.
// preset_override replaces the file's preset before the file's own keys
// apply (command line beats file beats preset defaults).
RunConfig parse_config_file(const std::string& path,
                            const std::optional<std::string>& preset_override = std::nullopt);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>",
                            const std::optional<std::string>& preset_override = std::nullopt);

std::string serialize_config(const RunConfig& config);

}  // namespace chemodg

#endif
