#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace ck {

// Exact rational scalar. All coefficients and weights in the engine are Rat;
// there is no floating point anywhere.
using Rat = mpq_class;

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : error {
    parse_error(const std::string& msg, std::size_t offset)
        : error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q". Reduced, denominator > 0.
inline std::optional<Rat> parse_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') i = 1;
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    bool slash = false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (slash || j + 1 >= s.size()) return std::nullopt;
            slash = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return std::nullopt;
    }
    Rat r;
    if (r.set_str(s, 10) != 0) return std::nullopt;
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// True iff 2r is an integer.
inline bool is_half_integer(const Rat& r) {
    Rat two_r = r * 2;
    return two_r.get_den() == 1;
}

inline long to_long(const Rat& r) {
    if (!is_integer(r) || !r.get_num().fits_slong_p()) throw error("rational is not a small integer: " + rat_str(r));
    return r.get_num().get_si();
}

} // namespace ck
