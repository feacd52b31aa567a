#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace relcalc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat rat_abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

/// Largest integer n with n <= r.
inline Int rat_floor(const Rat& r) {
    Int num = numerator(r);
    Int den = denominator(r);  // always positive
    Int q = num / den;
    if (num < 0 && q * den != num) --q;
    return q;
}

/// Exact rationals print as "p/q", or "p" when the denominator is 1.
inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

/// Parses "p", "-p" or "p/q" with q > 0 after sign normalization.
/// Throws std::invalid_argument on malformed input.
inline Rat rat_parse(const std::string& s) {
    auto is_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!is_int(s)) throw std::invalid_argument("malformed rational: " + s);
        return Rat(Int(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw std::invalid_argument("malformed rational: " + s);
    Int d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(Int(num), d);
}

inline Rat pow2(int k) {  // 2^k for any integer k
    if (k >= 0) return Rat(Int(1) << k);
    return Rat(Int(1), Int(1) << (-k));
}

}  // namespace relcalc
