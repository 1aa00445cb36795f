#pragma once

/**
 * Codimension-one cut-and-project nets on ℤ^{k−1}:
 *
 *   Y′ = { (n_1, …, n_{k−1}) : α_k + Σ n_i α_i ∈ I  (mod 1) }
 *
 * where I is a window union of special intervals over the convergent table
 * of one designated irrational slope. Along each fiber (n_2..n_{k−1} fixed)
 * the solutions in n_1 form a two-gap sequence with gaps q_m and q_{m−1},
 * which gives O(solutions) generation and counting without per-point
 * membership tests; mixed-field comparisons (e.g. a √5 slope against a √2
 * transverse shift) are resolved through cached high-precision enclosures
 * with an exact multi-field fallback, so every decision is certified.
 *
 * On top of that sit:
 *  - an explicit bounded-displacement map (ℓ_i, n_2, …) ↦ (i/|J|, n_2, …)
 *    onto the lattice (|J|⁻¹)ℤ × ℤ^{k−2}, with measured sup displacement;
 *  - sampled density-defect measurements sup_B |#(Y′∩B)/(λ|B|) − 1| and
 *    their geometric partial sums over dyadic box sides;
 *  - truncation of multi-level windows with a certified geometric bound on
 *    the discarded tail measure, plus dyadic box-count checks of the form
 *    #(Y′∩B) = 2^{(k−1)K}·|S| + O(K·2^{(k−2)K}).
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpn/intervals.hpp"

namespace cpn {

struct NetConfig {
    long k;                                // ambient dimension (net lives in ℤ^{k−1})
    std::vector<std::string> slope_specs;  // α_1..α_{k−1} as written
    std::vector<Real> slopes;              // parsed slope values
    std::string shift_spec;                // α_k as written
    Real shift;                            // parsed shift value
    long designated;                       // 1-based index of the table slope
    TablePtr table;                        // convergents of the designated slope
    WindowUnion window;                    // acceptance window, measure < 1
};

// Builds a validated config: the designated slope must parse as a certified
// irrational (its table is built to `depth`); the remaining slopes and the
// shift accept any real spec (rational literals included); window parts are
// (level, translate) pairs over the designated table.
NetConfig make_net_config(const std::vector<std::string>& slope_specs,
                          const std::string& shift_spec, long designated, long depth,
                          const std::vector<std::pair<long, std::string>>& window_parts,
                          long multiplicity_bound);

// JSON form of the same: {"slopes": [...], "shift": "...", "designated": 1,
// "depth": 40, "window": {"multiplicity_bound": 1, "parts": [{"m": 2,
// "gamma": "0"}, ...]}}.
NetConfig load_net_config(const std::string& json_text);

using NetPoint = std::vector<std::int64_t>;

// Inclusive integer ranges, one per net coordinate n_1..n_{k−1}.
struct Box {
    std::vector<std::pair<std::int64_t, std::int64_t>> range;
};

// Membership of a single lattice point, decided by exact multi-field
// arithmetic (the reference path; generation uses the fiber walk instead).
bool net_contains(const NetConfig& cfg, const NetPoint& n);

// All net points in the box, in lexicographic order.
std::vector<NetPoint> generate_net(const NetConfig& cfg, const Box& box);

// One fiber element: ℓ_{index} = n1, indexed so that ℓ_{−1} < 0 ≤ ℓ_0.
struct FiberHit {
    std::int64_t index;
    std::int64_t n1;
};

// The n_1-solutions on the fiber through `transverse` (n_2..n_{k−1}) with
// n_1 in [lo, hi], each carrying its global fiber index. Requires a window
// that is a single special interval.
std::vector<FiberHit> fiber_indices(const NetConfig& cfg,
                                    const std::vector<std::int64_t>& transverse,
                                    std::int64_t lo, std::int64_t hi);

struct BDReport {
    std::string box_desc;
    std::string target_lattice;         // description of (|J|⁻¹)ℤ × ℤ^{k−2}
    std::int64_t points = 0;
    std::vector<double> displacements;  // per point; filled when points ≤ cap
    double sup_displacement = 0.0;
    double ratio = 0.0;                 // sup displacement × |J|
    bool injective = false;
    static constexpr std::int64_t displacement_cap = 100000;
};

// Evaluates (ℓ_i, n_2, …, n_{k−1}) ↦ (i·|J|⁻¹, n_2, …, n_{k−1}) on every net
// point in the box, measuring displacements in the sup metric. Requires a
// single special-interval window.
BDReport bd_map(const NetConfig& cfg, const Box& box);

struct SampledBox {
    std::vector<std::int64_t> offset;
    std::int64_t count = 0;
    double defect = 0.0;
};
struct DensityDefect {
    std::int64_t rho = 0;
    double lambda = 0.0;
    std::vector<SampledBox> boxes;
    double max_defect = 0.0;  // sampled lower bound of the sup over all boxes
};

// Max relative defect |#(Y′∩B)/(λ·ρ^{k−1}) − 1| over `samples` boxes of side
// rho at seeded pseudo-random integer offsets.
DensityDefect density_defect(const NetConfig& cfg, std::int64_t rho, double lambda,
                             int samples, std::uint64_t seed);

struct BKSums {
    std::vector<double> defects;       // defect at side 2^t, t = 1..T
    std::vector<double> partial_sums;  // cumulative sums of the above
};

// Partial sums Σ_{t ≤ T} defect(2^t) with λ set to the window measure.
BKSums bk_partial_sums(const NetConfig& cfg, int T, int samples, std::uint64_t seed);

struct TruncationReport {
    WindowUnion kept;     // parts with level ≤ tail_level
    long tail_level;
    Real dropped_measure; // exact total length of the discarded parts
    Real tail_bound;      // certified bound ≥ C·Σ_{m>tail_level} |J(m,0)|
};

// Truncates a multi-level window (input sorted by level, ≤ C parts per
// level) at tail_level, certifying the discarded measure by the geometric
// decay of |J(m,0)|.
TruncationReport window_truncate(const std::vector<SpecialInterval>& intervals, long C,
                                 long tail_level);

struct BoxCountCheck {
    long K = 0;
    std::int64_t count = 0;  // #(Y′ ∩ [0, 2^K)^{k−1})
    double main_term = 0.0;  // 2^{(k−1)K} · window measure
    double error = 0.0;      // |count − main_term|
    double normalized = 0.0; // error / (K·2^{(k−2)K})
};

// Counts the net inside the dyadic cube [0, 2^K)^{k−1} and reports the
// deviation from the volume term, normalized by K·2^{(k−2)K}.
BoxCountCheck box_count_check(const NetConfig& cfg, long K);

}  // namespace cpn
