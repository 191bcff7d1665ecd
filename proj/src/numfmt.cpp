#include "chemodg/numfmt.hpp"

#include <charconv>
#include <system_error>

namespace chemodg {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& token, double* out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, *out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_int(const std::string& token, long long* out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, *out);
    return res.ec == std::errc() && res.ptr == last;
}

}  // namespace chemodg
