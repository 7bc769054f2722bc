#include "xlab/rational.hpp"

#include "xlab/errors.hpp"

#include <cstdio>

namespace xlab {

Rational parse_rational(const std::string& text) {
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0)
        throw ParseError("invalid rational '" + text + "'");
    if (r.get_den() == 0)
        throw ParseError("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace xlab
