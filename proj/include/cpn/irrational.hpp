#pragma once

/**
 * Parsed irrational inputs.
 *
 * Accepted spec strings:
 *   surd:P,Q,D,R             value (P + Q*sqrt(D)) / R, exact
 *   cf:a1,a2,...,aT          certified partial-quotient prefix of a value in (0,1)
 *   cf-periodic:a1,..,aj;(b1,..,bp)
 *                            eventually periodic expansion, converted to an exact surd
 *   dec:<decimal>@<bits>     decimal literal certified to |value - literal| < 2^-bits
 *
 * Every value is normalized into (0,1) by subtracting its floor; the applied
 * integer shift is retained. Rational inputs are rejected (NotIrrational)
 * whenever that is detectable: a surd with zero irrational part, or a
 * malformed periodic spec. Digit-list and decimal forms carry a finite
 * certification horizon and operations past it raise HorizonExceeded.
 */

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cpn/real.hpp"

namespace cpn {

enum class AlphaKind { surd, cf_prefix, periodic, decimal };

class Irrational {
  public:
    static Irrational parse(const std::string& spec);

    AlphaKind kind() const { return kind_; }
    const std::string& spec() const { return spec_; }
    bool is_exact() const { return kind_ == AlphaKind::surd || kind_ == AlphaKind::periodic; }

    // Normalized value in (0,1).
    Real value() const;
    const Surd& exact_value() const;  // requires is_exact()
    const BigInt& normalization_shift() const { return shift_; }

    // Declared partial quotients (cf forms only; empty otherwise).
    const std::vector<BigInt>& declared_digits() const { return declared_digits_; }
    // Certified digit horizon: how many partial quotients may be requested.
    // Exact kinds have no horizon (returns -1); cf prefixes return T; decimal
    // horizons are discovered during extraction.
    long declared_horizon() const { return horizon_; }

  private:
    AlphaKind kind_ = AlphaKind::surd;
    std::string spec_;
    Surd surd_;             // exact kinds
    RatInterval window_;    // enclosed kinds
    std::vector<BigInt> declared_digits_;
    long horizon_ = -1;
    BigInt shift_ = 0;
};

// General real input for net slopes and interval translates: every Irrational
// form plus exact rational literals ("0", "-3/4", "0.25").
Real parse_real_spec(const std::string& spec);

}  // namespace cpn
