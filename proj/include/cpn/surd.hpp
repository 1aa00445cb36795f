#pragma once

/**
 * Exact arithmetic in real quadratic fields.
 *
 * A Surd holds (p + q*sqrt(d)) / r with arbitrary-precision integer
 * coefficients in canonical form: r > 0, gcd(p, q, r) == 1, d square-free,
 * and d == 0 exactly when q == 0 (the rational case). All comparisons are
 * decided by integer sign computations; no floating point is consulted for
 * any ordering decision.
 *
 * Values from distinct fields (d1 != d2, both nonzero) do not combine; such
 * an attempt raises MixedField. Cross-field sums appear only in the net
 * module, which keeps them as explicit term lists (see MultiReal).
 */

#include <cstdint>
#include <string>
#include <utility>

#include "cpn/bigint.hpp"
#include "cpn/errors.hpp"

namespace cpn {

class Surd {
  public:
    Surd() : p_(0), q_(0), r_(1), d_(0) {}
    Surd(const BigInt& integer) : p_(integer), q_(0), r_(1), d_(0) {}
    Surd(std::int64_t integer) : p_(integer), q_(0), r_(1), d_(0) {}
    Surd(const BigRat& rational)
        : p_(boost::multiprecision::numerator(rational)),
          q_(0),
          r_(boost::multiprecision::denominator(rational)),
          d_(0) {}
    Surd(BigInt p, BigInt q, BigInt d, BigInt r) : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(std::move(d)) {
        canonicalize();
    }

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    const BigInt& r() const { return r_; }
    const BigInt& d() const { return d_; }

    bool is_rational() const { return q_ == 0; }
    bool is_zero() const { return p_ == 0 && q_ == 0; }
    BigRat rational_value() const;  // requires is_rational()

    // Exact sign in {-1, 0, +1}.
    int sign() const;
    int compare(const Surd& other) const;  // sign of (*this - other)
    bool operator==(const Surd& o) const { return p_ == o.p_ && q_ == o.q_ && r_ == o.r_ && d_ == o.d_; }
    bool operator!=(const Surd& o) const { return !(*this == o); }
    bool operator<(const Surd& o) const { return compare(o) < 0; }
    bool operator<=(const Surd& o) const { return compare(o) <= 0; }
    bool operator>(const Surd& o) const { return compare(o) > 0; }
    bool operator>=(const Surd& o) const { return compare(o) >= 0; }

    Surd operator-() const;
    Surd operator+(const Surd& o) const;
    Surd operator-(const Surd& o) const;
    Surd operator*(const Surd& o) const;
    Surd operator/(const Surd& o) const;
    Surd& operator+=(const Surd& o) { return *this = *this + o; }
    Surd& operator-=(const Surd& o) { return *this = *this - o; }
    Surd& operator*=(const Surd& o) { return *this = *this * o; }
    Surd& operator/=(const Surd& o) { return *this = *this / o; }

    Surd abs() const { return sign() < 0 ? -*this : *this; }
    Surd inverse() const;
    BigInt floor() const;

    // Directed rational enclosure with width <= 2^(1-bits).
    std::pair<BigRat, BigRat> enclosure(unsigned bits) const;
    double to_double() const;

    // Decimal rendering, truncated toward zero at `digits` fractional digits.
    std::string decimal(unsigned digits) const;
    std::string to_string() const;  // symbolic "(p+q*sqrt(d))/r"

  private:
    void canonicalize();
    BigInt field_of(const Surd& o) const;  // common d or MixedField

    BigInt p_, q_, r_, d_;
};

inline Surd operator+(std::int64_t a, const Surd& b) { return Surd(a) + b; }
inline Surd operator-(std::int64_t a, const Surd& b) { return Surd(a) - b; }
inline Surd operator*(std::int64_t a, const Surd& b) { return Surd(a) * b; }

}  // namespace cpn
