#pragma once

/**
 * Exact-or-certified real values.
 *
 * Real is either an exact Surd or a certified rational enclosure
 * (RatInterval). Arithmetic is exact whenever both operands are exact and in
 * compatible fields; otherwise it degrades to interval arithmetic with
 * directed rational endpoints. Predicates (sign, floor, comparisons) either
 * answer exactly or throw the caller-selected error code when the enclosure
 * straddles the decision boundary. Nothing in this header rounds.
 *
 * MultiReal is the small extension needed for cut-and-project membership
 * tests: a formal sum of surds from distinct quadratic fields plus an
 * optional enclosure term. Sign queries on a fuzz-free MultiReal always
 * terminate, because 1 and the sqrt(d) for distinct square-free d are
 * linearly independent over the rationals, so a nonzero sum stays bounded
 * away from zero at some refinement depth.
 */

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpn/surd.hpp"

namespace cpn {

class RatInterval {
  public:
    RatInterval() : lo_(0), hi_(0) {}
    RatInterval(BigRat point) : lo_(point), hi_(point) {}
    RatInterval(BigRat lo, BigRat hi);

    const BigRat& lo() const { return lo_; }
    const BigRat& hi() const { return hi_; }
    BigRat width() const { return hi_ - lo_; }
    BigRat midpoint() const { return (lo_ + hi_) / 2; }
    bool is_point() const { return lo_ == hi_; }

    // Bits of certified absolute precision: width <= 2^-certified_bits().
    long certified_bits() const;

    std::optional<int> sign() const;
    std::optional<BigInt> floor() const;

    RatInterval operator-() const { return RatInterval(-hi_, -lo_); }
    RatInterval operator+(const RatInterval& o) const { return RatInterval(lo_ + o.lo_, hi_ + o.hi_); }
    RatInterval operator-(const RatInterval& o) const { return *this + (-o); }
    RatInterval operator*(const RatInterval& o) const;
    RatInterval inverse() const;  // requires definite nonzero sign
    RatInterval operator/(const RatInterval& o) const { return *this * o.inverse(); }

  private:
    BigRat lo_, hi_;
};

class Real {
  public:
    Real() : v_(Surd(0)) {}
    Real(Surd s) : v_(std::move(s)) {}
    Real(RatInterval i) : v_(std::move(i)) {}
    Real(std::int64_t n) : v_(Surd(n)) {}
    Real(const BigInt& n) : v_(Surd(n)) {}
    Real(const BigRat& r) : v_(Surd(r)) {}

    bool is_exact() const { return std::holds_alternative<Surd>(v_); }
    const Surd& surd() const;            // requires is_exact()
    RatInterval enclosure(unsigned bits) const;

    int sign(Errc on_undecided = Errc::horizon_exceeded) const;
    bool is_zero(Errc on_undecided = Errc::horizon_exceeded) const { return sign(on_undecided) == 0; }
    int compare(const Real& o, Errc on_undecided = Errc::horizon_exceeded) const;
    bool less_than(const Real& o, Errc on_undecided = Errc::horizon_exceeded) const {
        return compare(o, on_undecided) < 0;
    }

    Real operator-() const;
    Real operator+(const Real& o) const;
    Real operator-(const Real& o) const;
    Real operator*(const Real& o) const;
    Real operator/(const Real& o) const;

    Real abs(Errc on_undecided = Errc::horizon_exceeded) const;
    BigInt floor(Errc on_undecided = Errc::horizon_exceeded) const;
    Real frac(Errc on_undecided = Errc::horizon_exceeded) const { return *this - Real(floor(on_undecided)); }

    double to_double() const;
    // Decimal rendering; exact values truncate, enclosures render the midpoint.
    std::string decimal(unsigned digits) const;
    // "exact" or the certified bit count of the enclosure.
    std::string precision_context() const;

  private:
    std::variant<Surd, RatInterval> v_;
};

class MultiReal {
  public:
    MultiReal() = default;
    MultiReal(const Surd& s) { add(s); }
    MultiReal(const Real& r) { add(r); }

    void add(const Surd& s);
    void add(const RatInterval& i);
    void add(const Real& r);
    void add(const MultiReal& m);
    void add_scaled(const Real& r, const BigInt& factor);

    MultiReal operator+(const MultiReal& o) const;
    MultiReal operator-(const MultiReal& o) const;
    MultiReal operator-() const;

    bool has_fuzz() const { return fuzz_.has_value(); }
    // Exact term list (at most one entry per field); empty means zero.
    const std::vector<Surd>& terms() const { return terms_; }
    // Exact when possible; refinement-driven otherwise. `on_undecided` only
    // fires when a fuzz term genuinely blocks the decision.
    int sign(Errc on_undecided = Errc::undecidable_at_horizon) const;
    BigInt floor(Errc on_undecided = Errc::undecidable_at_horizon) const;
    MultiReal frac(Errc on_undecided = Errc::undecidable_at_horizon) const;
    RatInterval enclosure(unsigned bits) const;
    double to_double() const;

  private:
    std::vector<Surd> terms_;  // at most one per field, field 0 = rational part
    std::optional<RatInterval> fuzz_;
};

}  // namespace cpn
