#include "cpn/ostrowski.hpp"

#include <algorithm>

#include "cpn/errors.hpp"

namespace cpn {

void validate_int_digits(const std::vector<BigInt>& c, const ConvergentTable& t) {
    long L = static_cast<long>(c.size());
    if (L > t.depth())
        fail(Errc::depth_insufficient,
             "digit string of length " + std::to_string(L) + " exceeds table depth " +
                 std::to_string(t.depth()));
    for (long k = 0; k < L; ++k) {
        if (c[k] < 0) fail(Errc::invalid_digits, "negative digit at index " + std::to_string(k));
        if (k == 0) {
            if (c[0] > t.digit(1) - 1)
                fail(Errc::invalid_digits, "leading digit must be < a_1");
        } else {
            if (c[k] > t.digit(k + 1))
                fail(Errc::invalid_digits, "digit at index " + std::to_string(k) + " exceeds a_" +
                                               std::to_string(k + 1));
            if (c[k] == t.digit(k + 1) && c[k - 1] != 0)
                fail(Errc::invalid_digits,
                     "maximal digit at index " + std::to_string(k) + " needs a zero below it");
        }
    }
}

OstrowskiInt encode_int(const BigInt& n, TablePtr table) {
    if (!table) fail(Errc::precondition_unmet, "null table");
    if (n < 0) fail(Errc::precondition_unmet, "Ostrowski integers are nonnegative");
    const ConvergentTable& t = *table;
    if (!(t.q(t.depth()) > n))
        fail(Errc::depth_insufficient, "table q_depth does not exceed the value to encode");
    OstrowskiInt out{table, {}};
    if (n == 0) return out;
    long top = t.depth() - 1;
    while (top > 0 && t.q(top) > n) --top;
    out.c.assign(top + 1, BigInt(0));
    BigInt rem = n;
    for (long k = top; k >= 0; --k) {
        BigInt ck = rem / t.q(k);
        out.c[k] = ck;
        rem -= ck * t.q(k);
    }
    if (rem != 0) fail(Errc::invariant_violation, "greedy encoding left a remainder");
    validate_int_digits(out.c, t);  // greedy output is always admissible
    return out;
}

BigInt decode_int(const OstrowskiInt& x) {
    if (!x.table) fail(Errc::precondition_unmet, "null table");
    validate_int_digits(x.c, *x.table);
    BigInt n = 0;
    for (long k = 0; k < static_cast<long>(x.c.size()); ++k) n += x.c[k] * x.table->q(k);
    return n;
}

int lex_compare(const OstrowskiInt& a, const OstrowskiInt& b) {
    if (!a.table || !b.table) fail(Errc::precondition_unmet, "null table");
    if (a.table.get() != b.table.get())
        fail(Errc::table_mismatch, "digit strings belong to different tables");
    validate_int_digits(a.c, *a.table);
    validate_int_digits(b.c, *b.table);
    long L = static_cast<long>(std::max(a.c.size(), b.c.size()));
    for (long k = L - 1; k >= 0; --k) {
        BigInt av = k < static_cast<long>(a.c.size()) ? a.c[k] : BigInt(0);
        BigInt bv = k < static_cast<long>(b.c.size()) ? b.c[k] : BigInt(0);
        if (av != bv) return av < bv ? -1 : 1;
    }
    return 0;
}

OstrowskiReal encode_real(const Real& beta, TablePtr table, long count) {
    if (!table) fail(Errc::precondition_unmet, "null table");
    if (count < 1) fail(Errc::precondition_unmet, "digit count must be >= 1");
    const ConvergentTable& t = *table;
    if (count > t.depth())
        fail(Errc::depth_insufficient, "table too shallow for the requested digit count");

    BigInt shift = (beta + t.alpha_value()).floor();
    Real rho = beta - Real(shift);
    if (rho.is_exact() && rho.surd().is_zero())
        fail(Errc::orbit_point, "value is an integer translate of 0; expansion is ambiguous");

    OstrowskiReal out;
    out.table = table;
    out.window_shift = shift;
    out.window_value = rho;

    bool restricted = false;
    for (long k = 1; k <= count; ++k) {
        const Real& X = t.remainder(k - 1);  // sign (-1)^(k-1)
        const Real& Y = t.remainder(k);
        BigInt cap = (k == 1) ? BigInt(t.digit(1) - 1)
                              : (restricted ? BigInt(t.digit(k) - 1) : t.digit(k));
        bool odd = (k % 2 == 1);
        BigInt v(-1);

        // Digit-0 tile: [-X, -Y) in real order for odd k, [-Y, -X) for even k.
        Real e0 = -X, e1 = -Y;
        const Real& mn0 = odd ? e0 : e1;
        const Real& mx0 = odd ? e1 : e0;
        if (!rho.less_than(mn0) && rho.less_than(mx0)) {
            v = 0;
        } else {
            // Digit-v tile (v >= 1) spans (v-1)X - Y .. vX - Y; locate by division.
            Real w = (rho + Y) / X;
            BigInt v0 = w.floor();
            for (BigInt cand : {v0, BigInt(v0 + 1)}) {
                if (cand < 1 || cand > cap) continue;
                Real lo = Real(BigInt(cand - 1)) * X - Y;
                Real hi = Real(cand) * X - Y;
                const Real& tmn = odd ? lo : hi;
                const Real& tmx = odd ? hi : lo;
                if (!rho.less_than(tmn) && rho.less_than(tmx)) {
                    v = cand;
                    break;
                }
            }
        }
        if (v < 0)
            fail(Errc::invariant_violation, "tile descent found no admissible digit at index " +
                                                std::to_string(k));
        if (v > 0) rho = rho - Real(v) * X;
        restricted = (v > 0);
        out.b.push_back(v);
    }
    return out;
}

Real decode_real(const OstrowskiReal& x) {
    if (!x.table) fail(Errc::precondition_unmet, "null table");
    validate_int_digits(x.b, *x.table);
    Real sum;
    for (long k = 0; k < static_cast<long>(x.b.size()); ++k)
        sum = sum + Real(x.b[k]) * x.table->remainder(k);
    return sum;
}

Real real_tail_bound(const OstrowskiReal& x) {
    if (!x.table) fail(Errc::precondition_unmet, "null table");
    long T = static_cast<long>(x.b.size());
    if (T < 1) fail(Errc::precondition_unmet, "no digits");
    return x.table->abs_remainder(T - 1) + x.table->abs_remainder(T);
}

InhomReport inhom_bound_check(const OstrowskiInt& n, const OstrowskiReal& beta) {
    if (!n.table || !beta.table) fail(Errc::precondition_unmet, "null table");
    if (n.table.get() != beta.table.get())
        fail(Errc::table_mismatch, "operands built against different tables");
    const ConvergentTable& t = *n.table;
    validate_int_digits(n.c, t);

    long Lc = static_cast<long>(n.c.size());
    const std::vector<BigInt>* bd = &beta.b;
    std::vector<BigInt> extended;

    // First disagreement index of the two digit strings (c padded with zeros).
    auto first_diff = [&](const std::vector<BigInt>& b) -> long {
        long scan = std::max<long>(Lc, static_cast<long>(b.size()));
        for (long k = 0; k < scan; ++k) {
            BigInt cv = k < Lc ? n.c[k] : BigInt(0);
            if (k >= static_cast<long>(b.size())) return -2;  // left certified region
            if (cv != b[k]) return k;
        }
        return -1;
    };

    long m = first_diff(*bd);
    if (m < 0) {
        // Certified digits all agree: recover the true index from an exact value.
        if (!beta.window_value.is_exact())
            fail(Errc::horizon_exceeded,
                 "digit strings agree through the certified horizon; disagreement index unknown");
        if (static_cast<long>(beta.b.size()) < t.depth()) {
            auto deeper = encode_real(beta.window_value, n.table, t.depth());
            extended = std::move(deeper.b);
            bd = &extended;
            m = first_diff(*bd);
        }
        if (m < 0)
            fail(Errc::depth_insufficient,
                 "digit strings agree to the full table depth; deepen the table");
    }

    InhomReport rep;
    rep.m = m;
    rep.delta = (m < Lc ? n.c[m] : BigInt(0)) - (*bd)[m];
    if (m < 4)
        fail(Errc::precondition_unmet,
             "first digit disagreement at index " + std::to_string(m) + "; the bound needs >= 4");

    BigInt mag = rep.delta < 0 ? BigInt(-rep.delta) : rep.delta;
    if (mag < 1) mag = 1;
    rep.rhs = BigRat(BigInt(3 * mag), t.q(m + 1));

    BigInt nval = 0, psum = 0;
    for (long k = 0; k < Lc; ++k) {
        nval += n.c[k] * t.q(k);
        psum += n.c[k] * t.p(k);
    }
    rep.lhs = (Real(nval) * t.alpha_value() - Real(psum) - beta.window_value).abs();
    rep.holds = !Real(rep.rhs).less_than(rep.lhs);
    return rep;
}

}  // namespace cpn
