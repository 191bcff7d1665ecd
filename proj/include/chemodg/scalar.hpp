#ifndef CHEMODG_SCALAR_HPP
#define CHEMODG_SCALAR_HPP

#include <cmath>

namespace chemodg {

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }
inline double negative_part(double v) { return v < 0.0 ? -v : 0.0; }

// x^p with the convention x^0 = 1 for every x, including x = 0; matches the
// continuous limit of the reaction coefficients at exponent 0.
inline double pow0(double x, double p) {
    if (p == 0.0) return 1.0;
    if (x == 0.0) return 0.0;
    return std::pow(x, p);
}

}  // namespace chemodg

#endif
