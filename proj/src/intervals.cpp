#include "cpn/intervals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cpn {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (ch < '0' || ch > '9') return false;
    return true;
}

BigRat parse_rational_literal(const std::string& tok) {
    const std::size_t slash = tok.find('/');
    const std::size_t dot = tok.find('.');
    if (slash != std::string::npos && dot != std::string::npos)
        fail(Errc::parse_error, "invalid rational literal '" + tok + "'");
    if (slash != std::string::npos) {
        const std::string num = tok.substr(0, slash);
        const std::string den = tok.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            fail(Errc::parse_error, "invalid fraction '" + tok + "'");
        BigInt d(den);
        if (d.is_zero()) fail(Errc::parse_error, "zero denominator in '" + tok + "'");
        return BigRat(BigInt(num), d);
    }
    if (dot != std::string::npos) {
        std::string whole = tok.substr(0, dot);
        const std::string frac = tok.substr(dot + 1);
        if (whole.empty()) whole = "0";
        if (!all_digits(whole) || !all_digits(frac))
            fail(Errc::parse_error, "invalid decimal '" + tok + "'");
        BigInt scale(1);
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        return BigRat(BigInt(whole)) + BigRat(BigInt(frac), scale);
    }
    if (!all_digits(tok)) fail(Errc::parse_error, "invalid integer '" + tok + "'");
    return BigRat(BigInt(tok));
}

std::string rat_to_string(const BigRat& v) {
    const BigInt num(numerator(v));
    const BigInt den(denominator(v));
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

}  // namespace

Gamma Gamma::parse(const std::string& spec) {
    std::string s;
    for (char ch : spec)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) fail(Errc::parse_error, "empty translate spec");
    Gamma g;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        const std::string term = s.substr(i, j - i);
        if (term.empty()) fail(Errc::parse_error, "empty term in translate spec '" + spec + "'");
        if (term.back() == 'a') {
            std::string coef = term.substr(0, term.size() - 1);
            if (coef.empty()) coef = "1";
            if (!all_digits(coef))
                fail(Errc::parse_error,
                     "alpha coefficient must be an integer in '" + spec + "'");
            const BigInt c(coef);
            if (sign > 0)
                g.s += c;
            else
                g.s -= c;
        } else {
            BigRat v = parse_rational_literal(term);
            if (sign < 0) v = BigRat(-v);
            g.r += v;
        }
        i = j;
    }
    return g;
}

Real Gamma::value(const ConvergentTable& t) const {
    Real v{BigRat(r)};
    if (!s.is_zero()) v = v + Real(s) * t.alpha_value();
    return v;
}

std::string Gamma::to_string() const {
    std::string out;
    if (!(r == 0)) out = rat_to_string(r);
    if (!s.is_zero()) {
        std::string coef;
        if (s == 1)
            coef = "a";
        else if (s == -1)
            coef = "-a";
        else
            coef = s.str() + "a";
        if (!out.empty() && coef[0] != '-') out += "+";
        out += coef;
    }
    if (out.empty()) out = "0";
    return out;
}

SpecialInterval::SpecialInterval(TablePtr table, long m, Gamma gamma)
    : table_(std::move(table)), m_(m), gamma_(std::move(gamma)) {
    if (!table_) fail(Errc::precondition_unmet, "special interval needs a table");
    if (m_ < 1) fail(Errc::precondition_unmet, "interval level must be >= 1");
    if (m_ > table_->depth())
        fail(Errc::depth_insufficient,
             "interval level " + std::to_string(m_) + " needs convergents beyond depth " +
                 std::to_string(table_->depth()));
    const ConvergentTable& t = *table_;
    gamma_value_ = gamma_.value(t);
    const Real& Dm1 = t.remainder(m_ - 1);
    const Real& Dm = t.remainder(m_);
    // D_k has sign (−1)^k; the left endpoint subtracts the positive remainder.
    const bool m_even = (m_ % 2 == 0);
    left_ = gamma_value_ - (m_even ? Dm : Dm1);
    right_ = gamma_value_ - (m_even ? Dm1 : Dm);
    length_ = right_ - left_;
    full_circle_ = (m_ == 1 && t.digit_i64(1) == 1);
    const Errc hor = Errc::horizon_exceeded;
    if (length_.sign(hor) <= 0)
        fail(Errc::invariant_violation, "special interval has nonpositive length");
    if (!full_circle_ && !length_.less_than(Real(1), hor))
        fail(Errc::invariant_violation, "special interval length must be < 1");
}

Real SpecialInterval::length_by_tails() const {
    const ConvergentTable& t = *table_;
    const Real zf = t.tail_frac(m_);
    const Real xi{BigRat(t.ratio(m_))};
    const Real one(1);
    return (one + zf) / (Real(t.q(m_)) * (one + zf * xi));
}

bool SpecialInterval::contains(const Real& x, Errc on_undecided) const {
    if (full_circle_) return true;
    const Real u = (x - left_).frac(on_undecided);
    return u.less_than(length_, on_undecided);
}

SpecialInterval make_interval(TablePtr table, long m, const Gamma& gamma) {
    return SpecialInterval(std::move(table), m, gamma);
}

std::vector<LevelPiece> level_partition(TablePtr table, long m) {
    if (!table) fail(Errc::precondition_unmet, "level partition needs a table");
    const ConvergentTable& t = *table;
    if (m < 1) fail(Errc::precondition_unmet, "partition level must be >= 1");
    if (m > t.depth())
        fail(Errc::depth_insufficient,
             "partition level " + std::to_string(m) + " needs convergents beyond depth " +
                 std::to_string(t.depth()));
    const Real& Dm1 = t.remainder(m - 1);
    const Real& Dm = t.remainder(m);
    const bool m_even = (m % 2 == 0);
    std::int64_t cap = t.digit_i64(m);
    if (m == 1) cap -= 1;  // the leading digit ranges over 0..a_1−1
    std::vector<LevelPiece> out;
    out.reserve(static_cast<std::size_t>(cap) + 1);
    {
        LevelPiece p;
        p.digit = 0;
        p.left = Real(0) - (m_even ? Dm : Dm1);
        p.right = Real(0) - (m_even ? Dm1 : Dm);
        p.length = p.right - p.left;
        out.push_back(std::move(p));
    }
    for (std::int64_t c = 1; c <= cap; ++c) {
        Real e1 = Real(BigInt(c - 1)) * Dm1 - Dm;
        Real e2 = Real(BigInt(c)) * Dm1 - Dm;
        LevelPiece p;
        p.digit = static_cast<long>(c);
        if (m_even) {  // D_{m−1} < 0, so larger digit sits further left
            p.left = std::move(e2);
            p.right = std::move(e1);
        } else {
            p.left = std::move(e1);
            p.right = std::move(e2);
        }
        p.length = p.right - p.left;
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

// Machine-word mirror of the walk state for surd-backed tables. Every value
// involved lives in one quadratic field, written (p + q√d)/R for a common
// positive denominator R; the walk only ever adds coefficients and takes
// signs, so when the coefficients plus their worst-case growth fit below
// 2^52 the loop can run on int64 with __int128 sign tests. The decisions are
// bit-identical to the Surd path — this is a speedup, not an approximation.
struct QuadCoef {
    std::int64_t p = 0, q = 0;
};
struct QuadWalkPlan {
    bool valid = false;
    std::int64_t d = 0;
    QuadCoef x, T, Dm, Dm1;
};

int quad_sign(std::int64_t p, std::int64_t q, std::int64_t d) {
    if (q == 0) return (p > 0) - (p < 0);
    if (p == 0) return (q > 0) - (q < 0);
    if (p > 0 && q > 0) return 1;
    if (p < 0 && q < 0) return -1;
    const __int128 a = static_cast<__int128>(p) * p;
    const __int128 b = static_cast<__int128>(d) * q * q;
    const int c = (a > b) - (a < b);
    return p > 0 ? c : -c;
}

QuadWalkPlan plan_quad_walk(const Real& x, const Real& T, const Real& Dm, const Real& Dm1,
                            std::int64_t max_hits) {
    QuadWalkPlan out;
    if (!x.is_exact() || !T.is_exact() || !Dm.is_exact() || !Dm1.is_exact()) return out;
    const Surd* vals[4] = {&x.surd(), &T.surd(), &Dm.surd(), &Dm1.surd()};
    BigInt d(0);
    for (const Surd* s : vals) {
        if (s->d() != 0) {
            if (d != 0 && s->d() != d) return out;
            d = s->d();
        }
    }
    const BigInt budget = BigInt(1) << 52;
    if (d > (1 << 20)) return out;
    BigInt R(1);
    for (const Surd* s : vals) R = boost::multiprecision::lcm(R, s->r());
    if (R > budget) return out;
    QuadCoef c[4];
    for (int i = 0; i < 4; ++i) {
        const BigInt f = R / vals[i]->r();
        const BigInt P = BigInt(vals[i]->p() * f), Q = BigInt(vals[i]->q() * f);
        if (abs(P) > budget || abs(Q) > budget) return out;
        c[i] = {P.convert_to<std::int64_t>(), Q.convert_to<std::int64_t>()};
    }
    const __int128 grow_p = std::max<__int128>(std::abs(c[2].p), std::abs(c[3].p));
    const __int128 grow_q = std::max<__int128>(std::abs(c[2].q), std::abs(c[3].q));
    const __int128 cap = static_cast<__int128>(1) << 52;
    if (std::abs(c[0].p) + grow_p * max_hits > cap || std::abs(c[0].q) + grow_q * max_hits > cap)
        return out;
    out.valid = true;
    out.d = d.convert_to<std::int64_t>();
    out.x = c[0];
    out.T = c[1];
    out.Dm = c[2];
    out.Dm1 = c[3];
    return out;
}

// Exact hit walk over J = J(m, γ): yields every n ∈ [1, N] with nα ∈ J in
// increasing order. After entering the window, the first-return map has
// exactly two branches: x ↦ x + D_m after q_m steps (inner piece) and
// x ↦ x + D_{m−1} after q_{m−1} steps (outer piece), so each subsequent hit
// costs one comparison and one addition.
template <typename Fn>
void walk_hits(const SpecialInterval& J, std::int64_t N, Fn&& on_hit) {
    const ConvergentTable& t = J.table();
    const long m = J.m();
    const Errc hor = Errc::horizon_exceeded;
    const bool m_even = (m % 2 == 0);
    const Real alpha = t.alpha_value();
    const Real& Dm1 = t.remainder(m - 1);
    const Real& Dm = t.remainder(m);
    const Real L0 = Real(0) - (m_even ? Dm : Dm1);
    const Real R0 = Real(0) - (m_even ? Dm1 : Dm);
    const Real one(1);
    const Real L1 = L0 + one;
    // The q_m branch applies iff x < R0 − D_m (even m) resp. x ≥ L0 − D_m
    // (odd m); both reduce to one comparison against T.
    const Real T = m_even ? R0 - Dm : L0 - Dm;
    const std::int64_t qm = checked_i64(t.q(m), "return time q_m");
    const std::int64_t qm1 = checked_i64(t.q(m - 1), "return time q_{m-1}");

    // Seed: fold x_1 = 1·α − γ into [L0, L0 + 1) and step until the window
    // is entered; entry happens within q_m + q_{m−1} steps.
    Real x = L0 + (alpha - J.gamma_value() - L0).frac(hor);
    std::int64_t n = 1;
    const std::int64_t seed_cap = 2 + qm + qm1;
    while (n <= N && !x.less_than(R0, hor)) {
        if (n > seed_cap)
            fail(Errc::invariant_violation, "window entry exceeded the return-time bound");
        ++n;
        x = x + alpha;
        if (!x.less_than(L1, hor)) x = x - one;
    }
    const QuadWalkPlan fast = plan_quad_walk(x, T, Dm, Dm1, N / std::max<std::int64_t>(1, qm1) + 2);
    if (fast.valid) {
        QuadCoef w = fast.x;
        while (n <= N) {
            on_hit(n);
            if ((quad_sign(w.p - fast.T.p, w.q - fast.T.q, fast.d) < 0) == m_even) {
                w.p += fast.Dm.p;
                w.q += fast.Dm.q;
                n += qm;
            } else {
                w.p += fast.Dm1.p;
                w.q += fast.Dm1.q;
                n += qm1;
            }
        }
        return;
    }
    while (n <= N) {
        on_hit(n);
        if (x.less_than(T, hor) == m_even) {
            x = x + Dm;
            n += qm;
        } else {
            x = x + Dm1;
            n += qm1;
        }
    }
}

}  // namespace

std::int64_t brute_count_hits(const SpecialInterval& J, std::int64_t N) {
    if (N < 0) fail(Errc::precondition_unmet, "hit count needs N >= 0");
    if (J.full_circle()) return N;
    const Errc hor = Errc::horizon_exceeded;
    const Real alpha = J.table().alpha_value();
    const Real one(1);
    Real x(0);
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        x = x + alpha;
        if (!x.less_than(one, hor)) x = x - one;
        if (J.contains(x, hor)) ++count;
    }
    return count;
}

std::int64_t count_hits(const SpecialInterval& J, std::int64_t N) {
    if (N < 1) fail(Errc::precondition_unmet, "hit count needs N >= 1");
    if (J.full_circle()) return N;
    const std::int64_t N_check = std::min<std::int64_t>(N, 10000);
    std::int64_t count = 0;
    std::int64_t count_check = 0;
    walk_hits(J, N, [&](std::int64_t n) {
        ++count;
        if (n <= N_check) ++count_check;
    });
    if (count_check != brute_count_hits(J, N_check))
        fail(Errc::invariant_violation, "fast hit count disagrees with brute-force enumeration");
    return count;
}

Real naive_discrepancy(TablePtr table, std::int64_t N, const Real& left, const Real& length) {
    if (!table) fail(Errc::precondition_unmet, "discrepancy count needs a table");
    if (N < 0) fail(Errc::precondition_unmet, "discrepancy count needs N >= 0");
    const Errc hor = Errc::horizon_exceeded;
    const Real alpha = table->alpha_value();
    const Real one(1);
    Real u = (Real(0) - left).frac(hor);  // phase of nα relative to the left end
    std::int64_t count = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        u = u + alpha;
        if (!u.less_than(one, hor)) u = u - one;
        if (u.less_than(length, hor)) ++count;
    }
    return (Real(BigInt(count)) - Real(BigInt(N)) * length).abs(hor);
}

DiscrepancyReport discrepancy_scan(TablePtr table, const std::vector<long>& levels,
                                   const std::vector<Gamma>& gammas, std::int64_t N_max) {
    if (!table) fail(Errc::precondition_unmet, "discrepancy scan needs a table");
    if (levels.empty() || gammas.empty())
        fail(Errc::precondition_unmet, "discrepancy scan needs at least one level and one translate");
    if (N_max < 1) fail(Errc::precondition_unmet, "discrepancy scan needs N_max >= 1");

    DiscrepancyReport rep;
    rep.N_max = N_max;
    {
        std::string d = std::to_string(levels.size()) + " level(s) x " +
                        std::to_string(gammas.size()) + " translate(s):";
        std::size_t shown = 0;
        for (const Gamma& g : gammas) {
            if (shown == 8) {
                d += " ...";
                break;
            }
            d += (shown ? ", " : " ") + g.to_string();
            ++shown;
        }
        rep.gamma_desc = std::move(d);
    }
    rep.decile_max.assign(10, 0.0);
    std::int64_t edges[10];
    for (int k = 0; k < 10; ++k) edges[k] = std::max<std::int64_t>(1, (N_max / 10) * (k + 1));
    edges[9] = N_max;
    const std::int64_t N_check = std::min<std::int64_t>(N_max, 10000);

    for (long m : levels) {
        for (const Gamma& g : gammas) {
            SpecialInterval J(table, m, g);
            DiscrepancyCell cell;
            cell.m = m;
            cell.gamma = g.to_string();
            cell.decile_max.assign(10, 0.0);
            if (J.full_circle()) {
                // count(N) = N and |J| = 1: the deviation vanishes identically.
                cell.count_at_N_max = N_max;
                cell.argmax_N = 1;
                cell.count_at_argmax = 1;
            } else {
                const double len = J.length().to_double();
                std::int64_t seg_start = 1;
                std::int64_t seg_count = 0;
                std::int64_t count_check = 0;
                // count(N) is constant on [from, to], so |count − N·len| is
                // maximal at the endpoints of each (possibly clipped) range.
                auto segment = [&](std::int64_t cnt, std::int64_t from, std::int64_t to) {
                    if (from > to) return;
                    const double c = static_cast<double>(cnt);
                    for (int k = 0; k < 10; ++k) {
                        const std::int64_t hi = std::min(edges[k], to);
                        if (from > hi) continue;
                        const double dev =
                            std::max(std::fabs(c - static_cast<double>(from) * len),
                                     std::fabs(c - static_cast<double>(hi) * len));
                        if (dev > cell.decile_max[k]) cell.decile_max[k] = dev;
                    }
                    const double d_from = std::fabs(c - static_cast<double>(from) * len);
                    const double d_to = std::fabs(c - static_cast<double>(to) * len);
                    if (d_from > cell.max_abs) {
                        cell.max_abs = d_from;
                        cell.argmax_N = from;
                        cell.count_at_argmax = cnt;
                    }
                    if (d_to > cell.max_abs) {
                        cell.max_abs = d_to;
                        cell.argmax_N = to;
                        cell.count_at_argmax = cnt;
                    }
                };
                walk_hits(J, N_max, [&](std::int64_t n) {
                    segment(seg_count, seg_start, n - 1);
                    ++seg_count;
                    if (n <= N_check) ++count_check;
                    seg_start = n;
                });
                segment(seg_count, seg_start, N_max);
                if (count_check != brute_count_hits(J, N_check))
                    fail(Errc::invariant_violation,
                         "fast hit count disagrees with brute-force enumeration");
                cell.count_at_N_max = seg_count;
            }
            for (int k = 0; k < 10; ++k)
                if (cell.decile_max[k] > rep.decile_max[k]) rep.decile_max[k] = cell.decile_max[k];
            rep.cells.push_back(std::move(cell));
        }
    }
    rep.max_abs = rep.decile_max[9];
    rep.growth = rep.decile_max[9] > rep.decile_max[0] + DiscrepancyReport::growth_tolerance;
    return rep;
}

WindowUnion::WindowUnion(std::vector<SpecialInterval> parts, long multiplicity_bound)
    : parts_(std::move(parts)), bound_(multiplicity_bound) {
    if (bound_ < 1) fail(Errc::precondition_unmet, "multiplicity bound must be >= 1");
    if (parts_.empty()) return;  // the empty window is legal (measure 0)
    const TablePtr& t0 = parts_.front().table_ptr();
    std::map<long, long> per_level;
    for (const SpecialInterval& J : parts_) {
        if (J.table_ptr() != t0) fail(Errc::table_mismatch, "window intervals use different tables");
        if (++per_level[J.m()] > bound_)
            fail(Errc::multiplicity_exceeded,
                 "more than " + std::to_string(bound_) + " window intervals share level " +
                     std::to_string(J.m()));
    }
    // Exact pairwise disjointness on the circle: arcs [x, x+a) and [y, y+b)
    // overlap iff frac(y−x) < a or frac(x−y) < b. Touching endpoints are
    // allowed under the half-open convention.
    const Errc hor = Errc::horizon_exceeded;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        for (std::size_t j = i + 1; j < parts_.size(); ++j) {
            const SpecialInterval& A = parts_[i];
            const SpecialInterval& B = parts_[j];
            if (A.full_circle() || B.full_circle())
                fail(Errc::invariant_violation,
                     "a full-circle interval cannot be disjoint from another interval");
            const Real d1 = (B.left() - A.left()).frac(hor);
            const Real d2 = (A.left() - B.left()).frac(hor);
            if (d1.less_than(A.length(), hor) || d2.less_than(B.length(), hor))
                fail(Errc::invariant_violation, "window intervals overlap");
        }
    }
}

Real WindowUnion::total_length() const {
    Real sum(0);
    for (const SpecialInterval& J : parts_) sum = sum + J.length();
    return sum;
}

bool WindowUnion::contains(const Real& x, Errc on_undecided) const {
    for (const SpecialInterval& J : parts_)
        if (J.contains(x, on_undecided)) return true;
    return false;
}

const TablePtr& WindowUnion::table_ptr() const {
    if (parts_.empty()) fail(Errc::precondition_unmet, "empty window has no table");
    return parts_.front().table_ptr();
}

}  // namespace cpn
