#pragma once

/**
 * Gap structure of A(m) = { n >= 0 : the first m Ostrowski digits of n are 0 }.
 *
 * Consecutive elements of A(m) differ by q_m or q_{m-1} only; which one is
 * determined by the leading live digit: gap q_m while c_{m+1} < a_{m+1},
 * gap q_{m-1} when c_{m+1} = a_{m+1} (the bundle then rolls over). Writing
 * '1' for a q_m gap and '2' for a q_{m-1} gap, the resulting infinite word
 * is the limit of the substitution blocks
 *
 *   B_{-1} = "2",  B_0 = "1",  B_i = B_{i-1}^{a_{m+i}} B_{i-2}   (i >= 1),
 *
 * whose symbol counts s_i ('1's) and r_i ('2's) satisfy the convergent
 * recurrences of [0; a_{m+1}, a_{m+2}, ...] and s_i q_m + r_i q_{m-1}
 * = q_{m+i}.
 *
 * The counting residual after M gaps is R(M) = M - n_M * |J|, where n_M is
 * the M-th element of A(m) and |J| = |D_{m-1}| + |D_m| is the density of
 * A(m); R stays bounded, which scan_residual makes observable.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpn/cf.hpp"

namespace cpn {

// Ordered walk over A(m) by gap replay. Digits are kept as machine integers;
// tables whose relevant q/a entries exceed int64 raise PreconditionUnmet, and
// walking past the table depth raises DepthInsufficient.
class AmEnumerator {
  public:
    AmEnumerator(TablePtr table, long m);

    std::int64_t current() const { return n_; }
    std::int64_t index() const { return index_; }  // current() is element #index()
    // Gap to the successor: q_m ('1') or q_{m-1} ('2').
    std::int64_t peek_gap() const;
    char peek_symbol() const;
    void step();

    long m() const { return m_; }
    const ConvergentTable& table() const { return *table_; }

  private:
    TablePtr table_;
    long m_;
    std::int64_t qm_, qm1_;           // q_m, q_{m-1}
    std::vector<std::int64_t> d_;     // d_[j] = digit at q-position m+j
    std::int64_t n_ = 0;
    std::int64_t index_ = 0;

    std::int64_t digit_bound(long j) const;  // a_{m+1+j}
    void carry(long j);
};

// Elements of A(m) up to and including limit.
std::vector<std::int64_t> enumerate_Am(TablePtr table, long m, std::int64_t limit);

// Substitution block B_i (i >= -1); refuses to materialize more than max_len
// symbols.
std::string block(TablePtr table, long m, long i, std::size_t max_len = 1000000);

// Symbol counts of B_i plus the verified identity s_i q_m + r_i q_{m-1} = q_{m+i}.
struct BlockStats {
    BigInt ones, twos;     // s_i, r_i
    BigInt length;         // s_i + r_i
    BigInt combined;       // s_i q_m + r_i q_{m-1} (== q_{m+i})
};
BlockStats block_stats(TablePtr table, long m, long i);

// Greedy decomposition of the first M symbols of the gap word into
// B_level^count factors with strictly decreasing levels; count never exceeds
// a_{m+level+1}.
std::vector<std::pair<long, long>> decompose_prefix(TablePtr table, long m, std::int64_t M);

// Exact counting residual R(M) = M - n_M |J| after M gaps.
Real counting_residual(TablePtr table, long m, std::int64_t M);

// Residual walk with periodic snapshots (every `snapshot_every` gaps, plus the
// final index). The running residual is resynchronized against the exact value
// at every snapshot, so accumulated floating error cannot compound.
struct ResidualRow {
    std::int64_t M;
    std::int64_t n_M;
    double residual;
    double prefix_max_abs;  // max |R| over all steps up to M
};
struct ResidualScan {
    long m;
    double density;  // |J(m,0)|
    std::vector<ResidualRow> rows;
    double max_abs;  // over the whole walk
};
ResidualScan scan_residual(TablePtr table, long m, std::int64_t M_max,
                           std::int64_t snapshot_every);

}  // namespace cpn
