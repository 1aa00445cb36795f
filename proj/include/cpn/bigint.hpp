#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>

#include "cpn/errors.hpp"

namespace cpn {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

// floor(a / b) for b != 0; rounds toward -infinity.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline BigInt floor_rat(const BigRat& r) {
    return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

// floor(sqrt(n)) for n >= 0.
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) fail(Errc::precondition_unmet, "isqrt of a negative value");
    return boost::multiprecision::sqrt(n);
}

inline bool is_perfect_square(const BigInt& n, BigInt* root = nullptr) {
    if (n < 0) return false;
    BigInt s = isqrt(n);
    if (root) *root = s;
    return s * s == n;
}

// Largest square divisor removed: returns square-free f with n = f * s^2.
// Trial division; inputs here are user-scale or small discriminants.
inline BigInt square_free_part(BigInt n, BigInt* square_root_out = nullptr) {
    if (n <= 0) fail(Errc::precondition_unmet, "square-free part needs a positive value");
    BigInt s = 1;
    for (BigInt p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
            n /= p * p;
            s *= p;
        }
        if (p > 100000) {
            // Beyond trial range: a remaining square factor can only be a
            // whole square of the residue; peel that single case and stop.
            BigInt r;
            if (is_perfect_square(n, &r)) {
                n = 1;
                s *= r;
            }
            break;
        }
    }
    if (square_root_out) *square_root_out = s;
    return n;
}

inline std::int64_t checked_i64(const BigInt& v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        fail(Errc::index_out_of_range, std::string(what) + " exceeds 64-bit range");
    return static_cast<std::int64_t>(v);
}

}  // namespace cpn
