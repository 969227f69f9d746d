#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational and integer scalars (GMP) plus small text helpers.
 */

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gwb {

using ExactRational = mpq_class;
using ExactInteger = mpz_class;

/// "<num>/<den>" in lowest terms with a positive denominator.
inline std::string to_fraction_string(ExactRational q) {
    q.canonicalize();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Integers print bare, everything else as num/den.
inline std::string to_display_string(ExactRational q) {
    q.canonicalize();
    if (q.get_den() == 1) return q.get_num().get_str();
    return to_fraction_string(q);
}

inline ExactRational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    ExactRational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
}

/// Size of numerator plus denominator in bits; the pivot cost in elimination.
inline std::size_t bit_length(const ExactRational& q) {
    return mpz_sizeinbase(q.get_num_mpz_t(), 2) + mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

inline bool is_integer(const ExactRational& q) { return q.get_den() == 1; }

}  // namespace gwb
