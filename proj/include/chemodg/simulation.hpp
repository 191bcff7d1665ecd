#ifndef CHEMODG_SIMULATION_HPP
#define CHEMODG_SIMULATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "chemodg/celldensity.hpp"
#include "chemodg/fespace.hpp"
#include "chemodg/params.hpp"
#include "chemodg/signals.hpp"

namespace chemodg {

struct SimState {
    int step = 0;
    double t = 0.0;  // always step * dt
    DGField u;
    CGField v;
    CGField w;
};

struct DiagnosticsRow {
    double t = 0.0;
    double mass = 0.0;            // integral of u
    double min_u = 0.0;
    double max_u = 0.0;           // L-infinity over elements
    double mass_bound_rhs = 0.0;  // integral u + dt*lambda*integral u^rho of this state
    double int_v = 0.0;           // lumped integral of v
    double int_w = 0.0;
    bool fallback_used = false;   // truncated solver produced this state
    int fp_iterations = 0;
};

enum class FallbackPolicy { Auto, LinearOnly, TruncatedAlways };

FallbackPolicy fallback_policy_from_string(const std::string& name);
std::string to_string(FallbackPolicy policy);

struct RunOptions {
    SignalSolveOptions signal;
    CellSolveOptions cell;
    FallbackPolicy policy = FallbackPolicy::Auto;
    // Linear solution below this floor triggers the truncated fallback.
    double fallback_trigger = -1e-10;
    // Per-step checks: positivity, mass inequality, zero signal mean.
    bool runtime_checks = true;
};

struct RunHooks {
    std::function<void(const SimState&, const DiagnosticsRow&)> on_step;  // called for every recorded row
};

struct RunResult {
    SimState state;
    std::vector<DiagnosticsRow> diagnostics;
    int fallback_count = 0;
};

// Advances the state from start step to T/dt. Each step solves the chemical
// signals first (parabolic or elliptic for the local model, mean-zero
// Poisson for the nonlocal one) and then the cell density with the linear
// scheme, falling back to the truncated fixed point when the linear
// solution dips below the trigger.
RunResult run(const ModelParams& params, const P1Operators& ops,
              const DGField& u0, const CGField& v0, const CGField& w0,
              const RunHooks& hooks = {}, const RunOptions& options = {},
              int start_step = 0);

struct BlowUpCriteria {
    double growth_factor = 5.0;
    int plateau_window = 200;    // steps
    double plateau_rtol = 0.02;  // relative max_u variation inside the window
};

enum class BlowUpClass { Bounded, BlowUp, Undecided };

std::string to_string(BlowUpClass c);

struct BlowUpVerdict {
    BlowUpClass classification = BlowUpClass::Undecided;
    double t_detect = 0.0;  // start of the first flat window past the growth threshold
    double peak = 0.0;
};

// Blow-up: max_u reaches growth_factor times its initial value and then
// stays flat (relative variation <= plateau_rtol over plateau_window rows).
// Bounded: never reaches the threshold. Undecided otherwise.
BlowUpVerdict classify_blowup(const std::vector<DiagnosticsRow>& diagnostics,
                              const BlowUpCriteria& criteria = {});

// Versioned text dump of a SimState; floats round-trip exactly.
void save_checkpoint(const SimState& state, const std::string& path);
SimState load_checkpoint(std::shared_ptr<const Mesh> mesh, const std::string& path);

}  // namespace chemodg

#endif
