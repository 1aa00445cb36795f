#pragma once

/**
 * Special intervals J(m, γ) on ℝ/ℤ and hit counting along the orbit {nα}.
 *
 * J(m, γ) is the translate by γ of the half-open interval with endpoints
 * −D_{m−1} and −D_m (ordered by sign, so it straddles γ). Its length
 * |D_{m−1}| + |D_m| admits a second, independent derivation from the
 * continued-fraction tails:
 *
 *   |J| = (1 + {ζ_m}) / (q_m (1 + {ζ_m} ξ_m)),   ξ_m = q_{m−1}/q_m.
 *
 * These windows are bounded-remainder sets: #{n ≤ N : nα ∈ J} − N|J| stays
 * bounded uniformly in N, which discrepancy_scan makes observable. The
 * return times to J take exactly two values, q_m and q_{m−1} (the interval
 * splits into two pieces exchanged by the first-return map), which gives an
 * O(hits) exact counting walk. For γ = 0 the hit set is exactly A(m).
 *
 * Degenerate case: m = 1 with a_1 = 1 makes |J| = 1; the interval is the
 * full circle and is flagged as such.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "cpn/cf.hpp"

namespace cpn {

// Exact translate γ = r + s·α with rational r and integer s, so membership
// questions about γ-translated intervals stay decidable.
struct Gamma {
    BigRat r;  // rational part
    BigInt s;  // integer coefficient of alpha

    // Grammar: signed terms joined by + or -. A term is a rational literal
    // ("2", "1/2", "0.65") or an integer multiple of alpha ("a", "-3a").
    static Gamma parse(const std::string& spec);
    Real value(const ConvergentTable& t) const;  // r + s*alpha
    std::string to_string() const;
};

class SpecialInterval {
  public:
    // Endpoints γ − D_{m−1} and γ − D_m; half-open [left, right) mod 1.
    SpecialInterval(TablePtr table, long m, Gamma gamma);

    long m() const { return m_; }
    const Gamma& gamma() const { return gamma_; }
    const Real& gamma_value() const { return gamma_value_; }
    const Real& left() const { return left_; }
    const Real& right() const { return right_; }
    const Real& length() const { return length_; }  // |D_{m-1}| + |D_m|, cached
    bool full_circle() const { return full_circle_; }

    // Independent length derivation from the tail values; equals length()
    // exactly for exact alpha.
    Real length_by_tails() const;

    // x ∈ [left, right) mod 1; exact for exact inputs. Enclosed inputs too
    // close to an endpoint raise `on_undecided`.
    bool contains(const Real& x, Errc on_undecided = Errc::undecidable_at_horizon) const;

    const ConvergentTable& table() const { return *table_; }
    const TablePtr& table_ptr() const { return table_; }

  private:
    TablePtr table_;
    long m_;
    Gamma gamma_;
    Real gamma_value_, left_, right_, length_;
    bool full_circle_ = false;
};

SpecialInterval make_interval(TablePtr table, long m, const Gamma& gamma);

// The digit tiles splitting the level-(m−1) window: piece 0 is J(m, 0);
// piece c (1 ≤ c ≤ cap_m) has endpoints (c−1)D_{m−1} − D_m and
// cD_{m−1} − D_m, with cap_1 = a_1 − 1 and cap_m = a_m for m ≥ 2. For
// m = 1 the pieces tile the whole circle; for m ≥ 2 they tile J(m−1, 0).
struct LevelPiece {
    long digit;
    Real left;
    Real right;
    Real length;
};
std::vector<LevelPiece> level_partition(TablePtr table, long m);

// #{1 ≤ n ≤ N : nα ∈ J} by direct per-point membership (the reference path).
std::int64_t brute_count_hits(const SpecialInterval& J, std::int64_t N);

// Same count via the two-gap return walk (O(hits) instead of O(N)), asserted
// against brute_count_hits on [1, min(N, 10^4)].
std::int64_t count_hits(const SpecialInterval& J, std::int64_t N);

// |#{n ≤ N : {nα} ∈ [left, left+length) mod 1} − N·length| by direct
// counting; exact.
Real naive_discrepancy(TablePtr table, std::int64_t N, const Real& left, const Real& length);

struct DiscrepancyCell {
    long m = 0;
    std::string gamma;
    std::int64_t count_at_N_max = 0;
    std::int64_t argmax_N = 0;          // N attaining the cell maximum
    std::int64_t count_at_argmax = 0;
    double max_abs = 0.0;               // max |count(N) − N·|J|| over N ≤ N_max
    std::vector<double> decile_max;     // same max restricted to N ≤ k·N_max/10
};
struct DiscrepancyReport {
    std::int64_t N_max = 0;
    std::string gamma_desc;
    std::vector<DiscrepancyCell> cells;
    std::vector<double> decile_max;     // merged over cells
    double max_abs = 0.0;
    bool growth = false;                // max grew from the first decile to the full range
    static constexpr double growth_tolerance = 0.01;
};
DiscrepancyReport discrepancy_scan(TablePtr table, const std::vector<long>& levels,
                                   const std::vector<Gamma>& gammas, std::int64_t N_max);

// Finite (possibly empty) list of pairwise-disjoint special intervals over
// one table, with at most `multiplicity_bound` intervals per level.
class WindowUnion {
  public:
    WindowUnion(std::vector<SpecialInterval> parts, long multiplicity_bound);

    const std::vector<SpecialInterval>& parts() const { return parts_; }
    long multiplicity_bound() const { return bound_; }
    Real total_length() const;
    bool contains(const Real& x, Errc on_undecided = Errc::undecidable_at_horizon) const;
    const TablePtr& table_ptr() const;

  private:
    std::vector<SpecialInterval> parts_;
    long bound_;
};

}  // namespace cpn
