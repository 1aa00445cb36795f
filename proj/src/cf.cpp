#include "cpn/cf.hpp"

#include <utility>

#include "cpn/errors.hpp"

namespace cpn {
namespace {

// Digit extraction for enclosed inputs: iterate x -> 1/x - floor(1/x) on the
// certified enclosure until the next digit is no longer decidable.
std::vector<BigInt> extract_digits(const RatInterval& window, long cap) {
    std::vector<BigInt> out;
    RatInterval x = window;
    while (static_cast<long>(out.size()) < cap) {
        auto sg = x.sign();
        if (!sg || *sg != 1) break;  // 0 possibly inside: cannot invert
        RatInterval inv = x.inverse();
        auto fl = inv.floor();
        if (!fl) break;
        if (*fl < 1) break;  // enclosure admits a value outside (0,1): stop
        out.push_back(*fl);
        x = inv - RatInterval(BigRat(*fl));
    }
    return out;
}

}  // namespace

long ConvergentTable::available_depth(const Irrational& alpha, long want) {
    if (want < 0) return 0;
    switch (alpha.kind()) {
        case AlphaKind::surd:
        case AlphaKind::periodic:
            return want;
        case AlphaKind::cf_prefix:
            return std::min(want, alpha.declared_horizon());
        case AlphaKind::decimal: {
            auto digits = extract_digits(alpha.value().enclosure(2), want);
            return static_cast<long>(digits.size());
        }
    }
    return 0;
}

std::shared_ptr<const ConvergentTable> ConvergentTable::build(const Irrational& alpha, long depth) {
    if (depth < 1) fail(Errc::precondition_unmet, "table depth must be >= 1");
    auto table = std::shared_ptr<ConvergentTable>(new ConvergentTable());
    table->alpha_ = std::make_shared<Irrational>(alpha);
    table->depth_ = depth;

    if (alpha.is_exact()) {
        Surd z = alpha.exact_value().inverse();  // zeta_1 = 1/alpha
        for (long k = 1; k <= depth; ++k) {
            table->zeta_.push_back(z);
            BigInt ak = z.floor();
            if (ak < 1) fail(Errc::invariant_violation, "partial quotient below 1");
            table->a_.push_back(ak);
            Surd frac = z - Surd(ak);
            if (frac.is_zero())
                fail(Errc::not_irrational, "continued fraction terminated: value is rational");
            z = frac.inverse();
        }
    } else {
        std::vector<BigInt> digits;
        if (alpha.kind() == AlphaKind::cf_prefix) {
            digits = alpha.declared_digits();
        } else {
            digits = extract_digits(alpha.value().enclosure(2), depth);
        }
        if (static_cast<long>(digits.size()) < depth)
            fail(Errc::horizon_exceeded,
                 "requested depth " + std::to_string(depth) + " but only " +
                     std::to_string(digits.size()) + " digits are certified");
        digits.resize(depth);
        table->a_ = std::move(digits);
    }

    // Convergents: stored with offset 1 so p_[0] is p_{-1}.
    table->p_ = {BigInt(1), BigInt(0)};
    table->q_ = {BigInt(0), BigInt(1)};
    for (long k = 1; k <= depth; ++k) {
        const BigInt& ak = table->a_[k - 1];
        table->p_.push_back(ak * table->p_[k] + table->p_[k - 1]);
        table->q_.push_back(ak * table->q_[k] + table->q_[k - 1]);
    }

    Real av = alpha.value();
    for (long k = 0; k <= depth; ++k)
        table->d_.push_back(Real(table->q_[k + 1]) * av - Real(table->p_[k + 1]));

    table->check_invariants();
    return table;
}

void ConvergentTable::check_invariants() const {
    for (long k = 0; k <= depth_; ++k)
        if (big_gcd(p(k), q(k)) != 1) fail(Errc::invariant_violation, "convergent not in lowest terms");

    // Sign alternation and |D_k| <= 1/q_{k+1}; for enclosed inputs stop at the
    // first comparison the enclosure cannot decide.
    try {
        for (long k = 0; k <= depth_; ++k) {
            int want = (k % 2 == 0) ? 1 : -1;
            if (d_[k].sign() != want) fail(Errc::invariant_violation, "remainder sign pattern broken");
            if (k + 1 <= depth_) {
                Real scaled = d_[k].abs() * Real(q(k + 1));
                if (Real(BigInt(1)).less_than(scaled))
                    fail(Errc::invariant_violation, "|D_k| exceeds 1/q_{k+1}");
            }
        }
    } catch (const Error& e) {
        if (e.code() != Errc::horizon_exceeded) throw;
    }
}

const BigInt& ConvergentTable::digit(long k) const {
    if (k < 1 || k > depth_) fail(Errc::index_out_of_range, "digit index " + std::to_string(k));
    return a_[k - 1];
}

std::int64_t ConvergentTable::digit_i64(long k) const { return checked_i64(digit(k), "partial quotient"); }

const BigInt& ConvergentTable::p(long k) const {
    if (k < -1 || k > depth_) fail(Errc::index_out_of_range, "p index " + std::to_string(k));
    return p_[k + 1];
}

const BigInt& ConvergentTable::q(long k) const {
    if (k < -1 || k > depth_) fail(Errc::index_out_of_range, "q index " + std::to_string(k));
    return q_[k + 1];
}

const Real& ConvergentTable::remainder(long k) const {
    if (k < 0 || k > depth_) fail(Errc::index_out_of_range, "remainder index " + std::to_string(k));
    return d_[k];
}

Real ConvergentTable::abs_remainder(long k) const { return remainder(k).abs(); }

Real ConvergentTable::tail_value(long m) const {
    if (m < 1 || m > depth_) fail(Errc::index_out_of_range, "tail index " + std::to_string(m));
    if (!zeta_.empty()) return Real(zeta_[m - 1]);
    long have = depth_ - m;
    if (have < 8)
        fail(Errc::horizon_exceeded,
             "tail value at " + std::to_string(m) + " needs at least 8 further digits");
    long use = std::min<long>(have, 80);
    // Enclose [0; a_{m+1}, ..., a_{m+use}] by its cylinder, then add a_m.
    BigInt pm1 = 1, p0 = 0, qm1 = 0, q0 = 1;
    for (long j = 1; j <= use; ++j) {
        const BigInt& b = a_[m + j - 1];
        BigInt p1 = b * p0 + pm1, q1 = b * q0 + qm1;
        pm1 = p0; p0 = p1;
        qm1 = q0; q0 = q1;
    }
    BigRat end1(p0, q0), end2(p0 + pm1, q0 + qm1);
    if (end2 < end1) std::swap(end1, end2);
    BigRat am(a_[m - 1]);
    return Real(RatInterval(am + end1, am + end2));
}

Real ConvergentTable::tail_frac(long m) const { return tail_value(m) - Real(digit(m)); }

BigRat ConvergentTable::ratio(long m) const {
    if (m < 1 || m > depth_) fail(Errc::index_out_of_range, "ratio index " + std::to_string(m));
    return BigRat(q(m - 1), q(m));
}

TablePtr table_for_value(const Irrational& alpha, const BigInt& n) {
    if (n < 0) fail(Errc::precondition_unmet, "Ostrowski encoding needs n >= 0");
    long want = 8;
    for (;;) {
        long avail = ConvergentTable::available_depth(alpha, want);
        if (avail < 1) fail(Errc::horizon_exceeded, "no certified digits available");
        auto t = ConvergentTable::build(alpha, avail);
        if (t->q(avail) > n) return t;
        if (avail < want)
            fail(Errc::horizon_exceeded,
                 "certified digits exhausted before q_k exceeded the requested value");
        want *= 2;
    }
}

}  // namespace cpn
