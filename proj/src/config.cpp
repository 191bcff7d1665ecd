#include "chemodg/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chemodg/mesh_io.hpp"
#include "chemodg/numfmt.hpp"

namespace chemodg {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

struct KeyContext {
    std::string origin;
    std::string section;
    std::string key;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(origin + ": [" + section + "] " + key + ": " + what);
    }

    double as_double(const std::string& value) const {
        double v = 0;
        if (!parse_double(value, &v)) fail("expected a number, got '" + value + "'");
        return v;
    }
    int as_int(const std::string& value) const {
        long long v = 0;
        if (!parse_int(value, &v)) fail("expected an integer, got '" + value + "'");
        return static_cast<int>(v);
    }
    bool as_bool(const std::string& value) const {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        fail("expected true/false, got '" + value + "'");
    }
};

void apply_key(RunConfig* cfg, const KeyContext& ctx, const std::string& value) {
    ModelParams& p = cfg->params;
    const std::string& s = ctx.section;
    const std::string& k = ctx.key;

    if (s == "model") {
        if (k == "preset") return;  // handled in the first pass
        if (k == "model") { p.model = model_kind_from_string(value); return; }
        if (k == "tau") {
            int t = ctx.as_int(value);
            if (t != 0 && t != 1) ctx.fail("tau must be 0 or 1");
            p.tau = t;
            return;
        }
        struct Entry { const char* name; double ModelParams::*field; };
        static const Entry entries[] = {
            {"chi", &ModelParams::chi},       {"xi", &ModelParams::xi},
            {"lambda", &ModelParams::lambda}, {"mu", &ModelParams::mu},
            {"c", &ModelParams::c},           {"n1", &ModelParams::n1},
            {"n2", &ModelParams::n2},         {"n3", &ModelParams::n3},
            {"rho", &ModelParams::rho},       {"k", &ModelParams::k},
            {"gamma", &ModelParams::gamma},   {"a", &ModelParams::a},
            {"d_decay", &ModelParams::d_decay}, {"alpha", &ModelParams::alpha},
            {"beta", &ModelParams::beta},     {"eta", &ModelParams::eta},
            {"epsilon", &ModelParams::epsilon}, {"T", &ModelParams::T},
            {"dt", &ModelParams::dt},
        };
        for (const Entry& e : entries)
            if (k == e.name) {
                p.*(e.field) = ctx.as_double(value);
                return;
            }
        ctx.fail("unknown key");
    }
    if (s == "mesh") {
        if (k == "source") {
            if (value == "preset") { return; }
            if (value == "disk") { cfg->mesh.kind = MeshSpec::Kind::Disk; return; }
            if (value == "ball") { cfg->mesh.kind = MeshSpec::Kind::Ball; return; }
            if (value == "file") { cfg->mesh.kind = MeshSpec::Kind::File; return; }
            ctx.fail("expected preset, disk, ball or file");
        }
        if (k == "path") { cfg->mesh.kind = MeshSpec::Kind::File; cfg->mesh.path = value; return; }
        if (k == "format") { mesh_format_from_string(value); cfg->mesh.format = value; return; }
        if (k == "radius") { cfg->mesh.radius = ctx.as_double(value); return; }
        if (k == "target_h") { cfg->mesh.target_h = ctx.as_double(value); return; }
        ctx.fail("unknown key");
    }
    if (s == "solver") {
        RunOptions& o = cfg->solver;
        if (k == "signal_tol") { o.signal.tol = ctx.as_double(value); return; }
        if (k == "cell_tol") { o.cell.tol = ctx.as_double(value); return; }
        if (k == "fp_tol") { o.cell.fp_tol = ctx.as_double(value); return; }
        if (k == "fp_max_iter") { o.cell.fp_max_iter = ctx.as_int(value); return; }
        if (k == "max_iter_factor") {
            o.signal.max_iter_factor = ctx.as_int(value);
            o.cell.max_iter_factor = o.signal.max_iter_factor;
            return;
        }
        if (k == "fallback") { o.policy = fallback_policy_from_string(value); return; }
        if (k == "fallback_trigger") { o.fallback_trigger = ctx.as_double(value); return; }
        if (k == "runtime_checks") { o.runtime_checks = ctx.as_bool(value); return; }
        ctx.fail("unknown key");
    }
    if (s == "output") {
        if (k == "directory") { cfg->output_directory = value; return; }
        if (k == "cadence") {
            int c = ctx.as_int(value);
            if (c < 1) ctx.fail("cadence must be >= 1");
            cfg->cadence = c;
            return;
        }
        if (k == "write_vtu") { cfg->write_vtu = ctx.as_bool(value); return; }
        ctx.fail("unknown key");
    }
    ctx.fail("unknown section");
}

}  // namespace

RunConfig RunConfig::from_preset(const std::string& name) {
    Preset pr = preset(name);
    RunConfig cfg;
    cfg.preset_name = pr.name;
    cfg.params = pr.params;
    cfg.mesh = pr.mesh;
    return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::optional<std::string>& preset_override) {
    // First pass: locate the preset so defaults are in place before overrides.
    struct Item {
        std::string section, key, value;
        int line;
    };
    std::vector<Item> items;
    {
        std::istringstream in(text);
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ParseError(origin + ":" + std::to_string(line_no) + ": malformed section header");
                section = trim(t.substr(1, t.size() - 2));
                if (section != "model" && section != "mesh" && section != "solver" && section != "output")
                    throw ParseError(origin + ":" + std::to_string(line_no) + ": unknown section [" + section + "]");
                continue;
            }
            size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ParseError(origin + ":" + std::to_string(line_no) + ": expected key = value");
            if (section.empty())
                throw ParseError(origin + ":" + std::to_string(line_no) + ": key outside any section");
            items.push_back({section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), line_no});
        }
    }

    std::string preset_name = "test3-nonlocal-2d";
    for (const Item& it : items)
        if (it.section == "model" && it.key == "preset") preset_name = it.value;
    if (preset_override) preset_name = *preset_override;

    RunConfig cfg = RunConfig::from_preset(preset_name);
    for (const Item& it : items) {
        KeyContext ctx{origin, it.section, it.key};
        apply_key(&cfg, ctx, it.value);
    }

    if (const char* env = std::getenv("CHEMODG_OUTPUT_DIR"); env && *env)
        cfg.output_directory = env;

    try {
        cfg.params.validate_ranges();
    } catch (const Error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path,
                            const std::optional<std::string>& preset_override) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path, preset_override);
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    const ModelParams& p = cfg.params;
    os << "[model]\n";
    os << "preset = " << cfg.preset_name << "\n";
    os << "model = " << to_string(p.model) << "\n";
    os << "tau = " << p.tau << "\n";
    struct Entry { const char* name; double value; };
    const Entry entries[] = {
        {"chi", p.chi},     {"xi", p.xi},       {"lambda", p.lambda}, {"mu", p.mu},
        {"c", p.c},         {"n1", p.n1},       {"n2", p.n2},         {"n3", p.n3},
        {"rho", p.rho},     {"k", p.k},         {"gamma", p.gamma},   {"a", p.a},
        {"d_decay", p.d_decay}, {"alpha", p.alpha}, {"beta", p.beta}, {"eta", p.eta},
        {"epsilon", p.epsilon}, {"T", p.T},     {"dt", p.dt},
    };
    for (const Entry& e : entries) os << e.name << " = " << format_double(e.value) << "\n";
    os << "\n[mesh]\n";
    switch (cfg.mesh.kind) {
        case MeshSpec::Kind::Disk: os << "source = disk\n"; break;
        case MeshSpec::Kind::Ball: os << "source = ball\n"; break;
        case MeshSpec::Kind::File: os << "source = file\npath = " << cfg.mesh.path
                                      << "\nformat = " << cfg.mesh.format << "\n"; break;
    }
    if (cfg.mesh.kind != MeshSpec::Kind::File) {
        os << "radius = " << format_double(cfg.mesh.radius) << "\n";
        os << "target_h = " << format_double(cfg.mesh.target_h) << "\n";
    }
    os << "\n[solver]\n";
    os << "signal_tol = " << format_double(cfg.solver.signal.tol) << "\n";
    os << "cell_tol = " << format_double(cfg.solver.cell.tol) << "\n";
    os << "fp_tol = " << format_double(cfg.solver.cell.fp_tol) << "\n";
    os << "fp_max_iter = " << cfg.solver.cell.fp_max_iter << "\n";
    os << "max_iter_factor = " << cfg.solver.signal.max_iter_factor << "\n";
    os << "fallback = " << to_string(cfg.solver.policy) << "\n";
    os << "fallback_trigger = " << format_double(cfg.solver.fallback_trigger) << "\n";
    os << "runtime_checks = " << (cfg.solver.runtime_checks ? "true" : "false") << "\n";
    os << "\n[output]\n";
    os << "directory = " << cfg.output_directory << "\n";
    os << "cadence = " << cfg.cadence << "\n";
    os << "write_vtu = " << (cfg.write_vtu ? "true" : "false") << "\n";
    return os.str();
}

}  // namespace chemodg
