#pragma once

/**
 * Ostrowski numeration relative to a convergent table for alpha in (0,1).
 *
 * Integers:  n = sum_{k>=0} c_{k+1} q_k   with digits stored least-significant
 * first (c[k] is the coefficient of q_k). Admissibility:
 *
 *   0 <= c_1 <= a_1 - 1,   0 <= c_{k+1} <= a_{k+1},
 *   c_{k+1} = a_{k+1}  forces  c_k = 0.
 *
 * Every n >= 0 has exactly one admissible digit string (no trailing zeros),
 * and the numeric order coincides with the most-significant-first
 * lexicographic order of digit strings.
 *
 * Reals:  beta = sum_{k>=0} b_{k+1} D_k over the window [-alpha, 1-alpha),
 * same digit constraints. Digits are produced by a half-open tile descent:
 * after digits b_1..b_{k-1} the residual lies in a half-open interval that
 * the candidate digit tiles partition exactly, so each step is forced.
 * Integer translates of 0 (the unique ambiguous orbit) are rejected with
 * OrbitPoint. Values only known by enclosure raise HorizonExceeded when a
 * tile boundary cannot be decided at the certified precision.
 */

#include <vector>

#include "cpn/cf.hpp"

namespace cpn {

struct OstrowskiInt {
    TablePtr table;
    std::vector<BigInt> c;  // c[k] = c_{k+1}, coefficient of q_k
};

// Raises InvalidDigits when the admissibility constraints fail and
// DepthInsufficient when the table is too shallow to validate.
void validate_int_digits(const std::vector<BigInt>& c, const ConvergentTable& t);

// Greedy encoding; requires q_depth > n (DepthInsufficient otherwise).
OstrowskiInt encode_int(const BigInt& n, TablePtr table);

// Digit-string value; validates first.
BigInt decode_int(const OstrowskiInt& x);

// Most-significant-first lexicographic comparison (-1/0/+1). Both operands
// must refer to the same table object (TableMismatch).
int lex_compare(const OstrowskiInt& a, const OstrowskiInt& b);

struct OstrowskiReal {
    TablePtr table;
    std::vector<BigInt> b;    // b[k] = b_{k+1}, coefficient of D_k
    BigInt window_shift = 0;  // beta - shift lies in [-alpha, 1-alpha)
    Real window_value;        // beta - shift (exact when beta and alpha are)
};

// First `count` window-expansion digits of beta (any real; the integer shift
// into [-alpha, 1-alpha) is recorded). Needs table depth >= count.
OstrowskiReal encode_real(const Real& beta, TablePtr table, long count);

// Partial sum of the encoded digits: sum b_{k+1} D_k.
Real decode_real(const OstrowskiReal& x);

// Bound on |window value - partial sum|: |D_{T-1}| + |D_T| for T digits.
Real real_tail_bound(const OstrowskiReal& x);

// Certified comparison of n alpha - sum c_{k+1} p_k against beta: with m the
// first index where the digit strings of n and beta disagree,
//
//   |n alpha - sum_k c_{k+1} p_k - beta_w| <= 3 max(1, |delta_{m+1}|) / q_{m+1}
//
// where delta_{m+1} is the digit difference at m. The bound is only valid for
// m >= 4 (PreconditionUnmet below that). When the certified digits of beta
// all match, the disagreement index is recovered by extending an exact beta
// (DepthInsufficient if the table runs out) and is otherwise unknowable
// (HorizonExceeded).
struct InhomReport {
    long m = -1;
    BigInt delta = 0;   // c_{m+1} - b_{m+1}
    BigRat rhs;         // 3 max(1,|delta|)/q_{m+1}
    Real lhs;           // |n alpha - sum c p_k - beta_w|
    bool holds = false;
};
InhomReport inhom_bound_check(const OstrowskiInt& n, const OstrowskiReal& beta);

}  // namespace cpn
