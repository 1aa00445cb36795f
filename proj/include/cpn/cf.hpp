#pragma once

/**
 * Continued-fraction convergent tables.
 *
 * For alpha in (0,1) with partial quotients a_1, a_2, ... the table holds,
 * up to a requested depth:
 *
 *   p_k / q_k    convergents, p_{-1}=1 q_{-1}=0, p_0=0 q_0=1,
 *                p_k = a_k p_{k-1} + p_{k-2}, q_k likewise
 *   D_k          signed remainder q_k alpha - p_k  (sign (-1)^k, never zero)
 *   zeta_m       tail value [a_m; a_{m+1}, ...]
 *   xi_m         q_{m-1} / q_m
 *
 * Exact inputs produce exact entries. Digit-list and decimal inputs produce
 * certified enclosures; requesting digits past the certification horizon
 * raises HorizonExceeded. Construction re-verifies the recurrences, the
 * coprimality gcd(p_k, q_k) = 1, the sign alternation of D_k, and the bound
 * |D_k| <= 1/q_{k+1}.
 */

#include <cstdint>
#include <memory>
#include <vector>

#include "cpn/irrational.hpp"
#include "cpn/real.hpp"

namespace cpn {

class ConvergentTable {
  public:
    // Factory; depth >= 1. Raises HorizonExceeded when an enclosed input
    // cannot certify that many digits.
    static std::shared_ptr<const ConvergentTable> build(const Irrational& alpha, long depth);

    // Largest certifiable depth for this input, capped at `want`.
    static long available_depth(const Irrational& alpha, long want);

    long depth() const { return depth_; }
    const Irrational& alpha() const { return *alpha_; }
    Real alpha_value() const { return alpha_->value(); }

    // Partial quotient a_k, 1 <= k <= depth.
    const BigInt& digit(long k) const;
    std::int64_t digit_i64(long k) const;

    // Convergent entries, -1 <= k <= depth.
    const BigInt& p(long k) const;
    const BigInt& q(long k) const;

    // D_k = q_k alpha - p_k, 0 <= k <= depth.
    const Real& remainder(long k) const;
    Real abs_remainder(long k) const;

    // zeta_m = [a_m; a_{m+1}, ...], 1 <= m <= depth. Exact for surd-backed
    // inputs; for digit-list and decimal inputs the value is enclosed from
    // the next digits (up to 80 of them; fewer than 8 past m raises
    // HorizonExceeded).
    Real tail_value(long m) const;
    // Fractional part {zeta_m} = zeta_m - a_m.
    Real tail_frac(long m) const;

    // xi_m = q_{m-1}/q_m, 1 <= m <= depth.
    BigRat ratio(long m) const;

  private:
    ConvergentTable() = default;
    void check_invariants() const;

    std::shared_ptr<const Irrational> alpha_;
    long depth_ = 0;
    std::vector<BigInt> a_;       // a_[k-1] = a_k
    std::vector<BigInt> p_, q_;   // p_[k+1] = p_k (offset 1), k from -1
    std::vector<Real> d_;         // d_[k] = D_k
    std::vector<Surd> zeta_;      // exact path only: zeta_[m-1] = zeta_m
};

using TablePtr = std::shared_ptr<const ConvergentTable>;

// Table deep enough to Ostrowski-encode n (smallest depth with q_depth > n),
// with a little headroom.
TablePtr table_for_value(const Irrational& alpha, const BigInt& n);

}  // namespace cpn
