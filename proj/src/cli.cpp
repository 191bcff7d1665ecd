#include "chemodg/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "chemodg/config.hpp"
#include "chemodg/mesh_io.hpp"
#include "chemodg/output.hpp"

namespace chemodg {

namespace {

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> preset_name;
    std::optional<double> chi, xi, lambda, mu, c, gamma, alpha, beta, T, dt, target_h;
    std::optional<std::string> output_dir, fallback, mesh_path, mesh_format;
    std::optional<std::string> resume_from, save_checkpoint;
    std::optional<int> cadence;
    std::optional<bool> no_vtu;
};

void add_override_flags(CLI::App* cmd, Overrides* ov) {
    cmd->add_option("--config", ov->config_path, "Configuration file");
    cmd->add_option("--preset", ov->preset_name, "Preset name (see 'presets')");
    cmd->add_option("--chi", ov->chi, "Chemoattraction strength");
    cmd->add_option("--xi", ov->xi, "Chemorepulsion strength");
    cmd->add_option("--lambda", ov->lambda, "Logistic growth coefficient");
    cmd->add_option("--mu", ov->mu, "Logistic decay coefficient");
    cmd->add_option("--c", ov->c, "Gradient damping strength");
    cmd->add_option("--gamma", ov->gamma, "Gradient damping exponent");
    cmd->add_option("--alpha", ov->alpha, "f1 exponent");
    cmd->add_option("--beta", ov->beta, "f2 exponent");
    cmd->add_option("--T", ov->T, "Final time");
    cmd->add_option("--dt", ov->dt, "Time step");
    cmd->add_option("--target-h", ov->target_h, "Mesh resolution target");
    cmd->add_option("--mesh", ov->mesh_path, "Mesh file (switches mesh source to file)");
    cmd->add_option("--mesh-format", ov->mesh_format, "Mesh file format (gmsh-msh-v2 | native-text)");
    cmd->add_option("--output-dir", ov->output_dir, "Output directory");
    cmd->add_option("--cadence", ov->cadence, "Snapshot cadence in steps");
    cmd->add_option("--fallback", ov->fallback, "Cell solver policy: auto | linear | truncated");
    cmd->add_flag("--no-vtu", [ov](int64_t) { ov->no_vtu = true; }, "Skip VTU snapshots");
}

RunConfig resolve_config(const Overrides& ov) {
    // Flags beat the file, the file beats preset defaults; a preset flag
    // replaces the file's preset before the file's other keys apply.
    RunConfig cfg;
    if (ov.config_path) {
        cfg = parse_config_file(*ov.config_path, ov.preset_name);
    } else {
        cfg = RunConfig::from_preset(ov.preset_name.value_or("test3-nonlocal-2d"));
    }
    if (ov.chi) cfg.params.chi = *ov.chi;
    if (ov.xi) cfg.params.xi = *ov.xi;
    if (ov.lambda) cfg.params.lambda = *ov.lambda;
    if (ov.mu) cfg.params.mu = *ov.mu;
    if (ov.c) cfg.params.c = *ov.c;
    if (ov.gamma) cfg.params.gamma = *ov.gamma;
    if (ov.alpha) cfg.params.alpha = *ov.alpha;
    if (ov.beta) cfg.params.beta = *ov.beta;
    if (ov.T) cfg.params.T = *ov.T;
    if (ov.dt) cfg.params.dt = *ov.dt;
    if (ov.target_h) cfg.mesh.target_h = *ov.target_h;
    if (ov.mesh_path) {
        cfg.mesh.kind = MeshSpec::Kind::File;
        cfg.mesh.path = *ov.mesh_path;
    }
    if (ov.mesh_format) cfg.mesh.format = *ov.mesh_format;
    if (ov.output_dir) cfg.output_directory = *ov.output_dir;
    if (ov.cadence) cfg.cadence = *ov.cadence;
    if (ov.fallback) cfg.solver.policy = fallback_policy_from_string(*ov.fallback);
    if (ov.no_vtu) cfg.write_vtu = false;
    cfg.params.validate_ranges();
    return cfg;
}

int cmd_run(const Overrides& ov) {
    RunConfig cfg = resolve_config(ov);
    std::filesystem::create_directories(cfg.output_directory);

    auto mesh = build_preset_mesh(cfg.mesh);
    Preset pr = preset(cfg.preset_name);
    InitialData init = build_initial_data(mesh, pr);
    P1Operators ops = build_p1_operators(mesh);

    std::cout << "preset " << cfg.preset_name << ": " << mesh->num_elements() << " elements, "
              << mesh->num_vertices() << " vertices, h = " << ops.quality.h << "\n";

    int start_step = 0;
    if (ov.resume_from) {
        SimState restored = load_checkpoint(mesh, *ov.resume_from);
        init.u0 = restored.u;
        init.v0 = restored.v;
        init.w0 = restored.w;
        start_step = restored.step;
        std::cout << "resuming from step " << start_step << "\n";
    }

    RunHooks hooks;
    const std::string dir = cfg.output_directory;
    const int cadence = cfg.cadence;
    const bool vtu = cfg.write_vtu;
    hooks.on_step = [&](const SimState& state, const DiagnosticsRow&) {
        if (!vtu) return;
        const long long total = std::llround(cfg.params.T / cfg.params.dt);
        if (state.step % cadence == 0 || state.step == total) {
            std::ostringstream name;
            name << dir << "/state_" << std::setw(6) << std::setfill('0') << state.step << ".vtu";
            write_vtu(state, name.str());
        }
    };

    RunResult result =
        run(cfg.params, ops, init.u0, init.v0, init.w0, hooks, cfg.solver, start_step);
    write_diagnostics_csv(result.diagnostics, dir + "/diagnostics.csv");
    if (ov.save_checkpoint) save_checkpoint(result.state, *ov.save_checkpoint);

    const DiagnosticsRow& last = result.diagnostics.back();
    std::cout << "finished at t = " << last.t << ": mass = " << last.mass
              << ", max u = " << last.max_u << ", min u = " << last.min_u
              << ", fallbacks = " << result.fallback_count << "\n";
    std::cout << "wrote " << dir << "/diagnostics.csv\n";
    return 0;
}

int cmd_presets() {
    for (const std::string& name : preset_names()) {
        Preset pr = preset(name);
        std::cout << name << "\n    " << pr.description << "\n";
    }
    return 0;
}

int cmd_validate(const Overrides& ov) {
    RunConfig cfg = resolve_config(ov);
    int dim = cfg.mesh.kind == MeshSpec::Kind::Ball ? 3 : 2;
    ValidateOptions vopts;
    if (cfg.mesh.kind != MeshSpec::Kind::File) {
        // Analytic domain measures of the preset geometries.
        vopts.domain_measure = dim == 2 ? M_PI * cfg.mesh.radius * cfg.mesh.radius
                                        : 4.0 / 3.0 * M_PI * std::pow(cfg.mesh.radius, 3);
    }
    auto reports = validate_params(cfg.params, dim, vopts);
    std::cout << "parameter report for " << cfg.preset_name << " (d = " << dim << ")\n";
    for (const auto& r : reports) {
        std::cout << "  " << (r.satisfied ? "[ok]  " : "[VIOLATED] ") << r.name << ": " << r.detail;
        if (r.name == "condgamma") std::cout << " (margin " << r.margin << ")";
        std::cout << "\n";
    }
    return 0;
}

int cmd_mesh_info(const Overrides& ov) {
    RunConfig cfg = resolve_config(ov);
    auto mesh = build_preset_mesh(cfg.mesh);
    MeshQualityReport q = quality_report(*mesh);
    std::cout << "dim " << mesh->dim << ", " << mesh->num_vertices() << " vertices, "
              << mesh->num_elements() << " elements\n";
    std::cout << "interior facets " << mesh->interior_facets.size() << ", boundary facets "
              << mesh->boundary_facets.size() << "\n";
    std::cout << "domain measure " << mesh->domain_measure << "\n";
    std::cout << "h = " << q.h << ", max angle = " << q.max_angle << " rad, non-obtuse = "
              << (q.is_non_obtuse ? "yes" : "no")
              << ", shape regularity = " << q.shape_regularity_ratio << "\n";
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Upwind DG solver for chemotaxis models with gradient damping"};
    app.require_subcommand(1);

    Overrides run_ov, validate_ov, mesh_ov;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a simulation");
    add_override_flags(run_cmd, &run_ov);
    CLI::App* presets_cmd = app.add_subcommand("presets", "List experiment presets");
    CLI::App* validate_cmd = app.add_subcommand("validate", "Report parameter conditions");
    add_override_flags(validate_cmd, &validate_ov);
    CLI::App* mesh_cmd = app.add_subcommand("mesh-info", "Mesh quality report");
    add_override_flags(mesh_cmd, &mesh_ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_ov);
        if (presets_cmd->parsed()) return cmd_presets();
        if (validate_cmd->parsed()) return cmd_validate(validate_ov);
        if (mesh_cmd->parsed()) return cmd_mesh_info(mesh_ov);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace chemodg
