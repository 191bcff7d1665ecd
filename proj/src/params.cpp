#include "chemodg/params.hpp"

#include <sstream>

namespace chemodg {

std::string to_string(ModelKind kind) {
    return kind == ModelKind::Local ? "local" : "nonlocal";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "local") return ModelKind::Local;
    if (name == "nonlocal") return ModelKind::Nonlocal;
    throw Error("unknown model kind: " + name + " (expected local or nonlocal)");
}

void ModelParams::validate_ranges() const {
    auto fail = [](const std::string& what) { throw Error("ModelParams: " + what); };
    if (tau != 0 && tau != 1) fail("tau must be 0 or 1");
    if (chi < 0 || xi < 0 || lambda < 0 || mu < 0 || c < 0)
        fail("chi, xi, lambda, mu, c must be nonnegative");
    if (rho < 1 || k < 1 || gamma < 1) fail("rho, k, gamma must be >= 1");
    if (gamma > 2) fail("gamma must lie in [1, 2]");
    if (a < 0 || d_decay < 0) fail("decay rates a, d_decay must be nonnegative");
    if (!(alpha > 0) || !(beta > 0)) fail("alpha, beta must be positive");
    if (eta < 0) fail("eta must be nonnegative");
    if (!(epsilon > 0)) fail("epsilon must be positive");
    if (T < 0) fail("T must be nonnegative");
    if (!(dt > 0)) fail("dt must be positive");
}

}  // namespace chemodg
