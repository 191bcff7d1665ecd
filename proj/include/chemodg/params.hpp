#ifndef CHEMODG_PARAMS_HPP
#define CHEMODG_PARAMS_HPP

#include <string>

#include "chemodg/mesh.hpp"

namespace chemodg {

enum class ModelKind { Local, Nonlocal };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// All constants of the continuous models plus the discretization knobs.
// The signal sources are f1(s) = (s + eta)^alpha and f2(s) = (s + eta)^beta,
// with eta = 0 giving the plain power laws used in the experiments.
struct ModelParams {
    ModelKind model = ModelKind::Local;
    int tau = 1;  // 1: parabolic signals, 0: elliptic; ignored (treated as 0) for the nonlocal model

    double chi = 1.0;      // chemoattraction strength
    double xi = 1.0;       // chemorepulsion strength
    double lambda = 1.0;   // logistic growth
    double mu = 1.0;       // logistic decay
    double c = 0.0;        // gradient damping strength
    double n1 = 1.0, n2 = 1.0, n3 = 1.0;
    double rho = 1.0;      // growth exponent
    double k = 1.1;        // decay exponent
    double gamma = 1.0;    // damping exponent
    double a = 1.0;        // decay rate of v
    double d_decay = 1.0;  // decay rate of w (named d in the continuous model)
    double alpha = 1.0;    // f1 exponent
    double beta = 1.0;     // f2 exponent
    double eta = 0.0;      // source shift
    double epsilon = 1e-10;  // log regularization

    double T = 0.0;        // final time
    double dt = 1e-5;      // time step

    int effective_tau() const { return model == ModelKind::Nonlocal ? 0 : tau; }

    // Throws Error when a value is outside its admissible range.
    void validate_ranges() const;
};

}  // namespace chemodg

#endif
