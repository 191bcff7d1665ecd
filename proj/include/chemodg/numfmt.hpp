#ifndef CHEMODG_NUMFMT_HPP
#define CHEMODG_NUMFMT_HPP

#include <string>

namespace chemodg {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict double parse of an entire token; returns false on garbage.
bool parse_double(const std::string& token, double* out);

bool parse_int(const std::string& token, long long* out);

}  // namespace chemodg

#endif
