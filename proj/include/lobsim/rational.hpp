#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace lobsim {

using Rat = mpq_class;

// mpq_class(n, d) stores the fraction as given; comparisons misbehave on
// non-canonical values, so all construction goes through here.
inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p/q", integers, and plain decimals ("0.5" becomes 1/2 exactly).
inline Rat parse_rat(const std::string& text) {
    std::string t = text;
    auto dot = t.find('.');
    if (dot != std::string::npos && t.find('/') == std::string::npos) {
        std::string digits = t.substr(0, dot) + t.substr(dot + 1);
        std::string den = "1" + std::string(t.size() - dot - 1, '0');
        t = digits + "/" + den;
    }
    Rat r;
    if (r.set_str(t, 10) != 0 || r.get_den() == 0)
        throw std::invalid_argument("bad rational: '" + text + "'");
    r.canonicalize();
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline std::string to_string(const Rat& r) { return r.get_str(); }

}  // namespace lobsim
