#include "cpn/real.hpp"

#include <algorithm>

namespace cpn {

namespace {

long msb_bits(const BigInt& n) {
    if (n == 0) return 0;
    return static_cast<long>(boost::multiprecision::msb(boost::multiprecision::abs(n)));
}

}  // namespace

RatInterval::RatInterval(BigRat lo, BigRat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_ > hi_) fail(Errc::precondition_unmet, "interval endpoints out of order");
}

long RatInterval::certified_bits() const {
    BigRat w = width();
    if (w == 0) return 1'000'000;  // exact point, effectively unlimited
    long num = msb_bits(boost::multiprecision::numerator(w));
    long den = msb_bits(boost::multiprecision::denominator(w));
    return den - num - 1;  // width <= 2^(num-den+1)
}

std::optional<int> RatInterval::sign() const {
    if (lo_ > 0) return 1;
    if (hi_ < 0) return -1;
    if (lo_ == 0 && hi_ == 0) return 0;
    return std::nullopt;
}

std::optional<BigInt> RatInterval::floor() const {
    BigInt fl = floor_rat(lo_);
    BigInt fh = floor_rat(hi_);
    if (fl == fh) return fl;
    return std::nullopt;
}

RatInterval RatInterval::operator*(const RatInterval& o) const {
    BigRat a = lo_ * o.lo_, b = lo_ * o.hi_, c = hi_ * o.lo_, d = hi_ * o.hi_;
    return RatInterval(std::min({a, b, c, d}), std::max({a, b, c, d}));
}

RatInterval RatInterval::inverse() const {
    auto s = sign();
    if (!s || *s == 0) fail(Errc::horizon_exceeded, "reciprocal of an enclosure containing zero");
    return RatInterval(1 / hi_, 1 / lo_);
}

const Surd& Real::surd() const {
    if (!is_exact()) fail(Errc::precondition_unmet, "enclosure-backed real used where an exact value is required");
    return std::get<Surd>(v_);
}

RatInterval Real::enclosure(unsigned bits) const {
    if (is_exact()) {
        auto [lo, hi] = std::get<Surd>(v_).enclosure(bits);
        return RatInterval(lo, hi);
    }
    return std::get<RatInterval>(v_);
}

int Real::sign(Errc on_undecided) const {
    if (is_exact()) return std::get<Surd>(v_).sign();
    auto s = std::get<RatInterval>(v_).sign();
    if (!s) fail(on_undecided, "sign undecidable at the certified precision");
    return *s;
}

int Real::compare(const Real& o, Errc on_undecided) const { return (*this - o).sign(on_undecided); }

namespace {

// Promote a mixed pair to intervals, refining the exact side well below the
// enclosure side's uncertainty so it contributes no meaningful width.
unsigned promote_bits(const RatInterval& iv) {
    long b = iv.certified_bits();
    long want = b + 64;
    return static_cast<unsigned>(std::clamp(want, 128L, 8192L));
}

}  // namespace

Real Real::operator-() const {
    if (is_exact()) return Real(-std::get<Surd>(v_));
    return Real(-std::get<RatInterval>(v_));
}

#define CPN_REAL_BINOP(OP)                                                                 \
    Real Real::operator OP(const Real& o) const {                                         \
        if (is_exact() && o.is_exact()) return Real(std::get<Surd>(v_) OP o.surd());      \
        const RatInterval* ia = std::get_if<RatInterval>(&v_);                            \
        const RatInterval* ib = std::get_if<RatInterval>(&o.v_);                          \
        unsigned bits = ia && ib ? 256 : promote_bits(ia ? *ia : *ib);                    \
        return Real(enclosure(bits) OP o.enclosure(bits));                                \
    }

CPN_REAL_BINOP(+)
CPN_REAL_BINOP(-)
CPN_REAL_BINOP(*)
CPN_REAL_BINOP(/)
#undef CPN_REAL_BINOP

Real Real::abs(Errc on_undecided) const { return sign(on_undecided) < 0 ? -*this : *this; }

BigInt Real::floor(Errc on_undecided) const {
    if (is_exact()) return std::get<Surd>(v_).floor();
    auto f = std::get<RatInterval>(v_).floor();
    if (!f) fail(on_undecided, "floor undecidable at the certified precision");
    return *f;
}

double Real::to_double() const {
    if (is_exact()) return std::get<Surd>(v_).to_double();
    return std::get<RatInterval>(v_).midpoint().convert_to<double>();
}

std::string Real::decimal(unsigned digits) const {
    if (is_exact()) return std::get<Surd>(v_).decimal(digits);
    return Surd(std::get<RatInterval>(v_).midpoint()).decimal(digits);
}

std::string Real::precision_context() const {
    if (is_exact()) return "exact";
    return "bits:" + std::to_string(std::get<RatInterval>(v_).certified_bits());
}

void MultiReal::add(const Surd& s) {
    if (s.is_zero()) return;
    for (auto& t : terms_) {
        if (t.d() == s.d()) {
            t += s;
            return;
        }
    }
    // A rational addend folds into any existing single term exactly.
    if (s.is_rational() && !terms_.empty()) {
        terms_.front() += s;
        return;
    }
    for (auto& t : terms_) {
        if (t.is_rational()) {
            t += s;
            return;
        }
    }
    terms_.push_back(s);
}

void MultiReal::add(const RatInterval& i) {
    if (fuzz_)
        fuzz_ = *fuzz_ + i;
    else
        fuzz_ = i;
}

void MultiReal::add(const Real& r) {
    if (r.is_exact())
        add(r.surd());
    else
        add(r.enclosure(0));
}

void MultiReal::add(const MultiReal& m) {
    for (const auto& t : m.terms_) add(t);
    if (m.fuzz_) add(*m.fuzz_);
}

void MultiReal::add_scaled(const Real& r, const BigInt& factor) {
    if (factor == 0) return;
    add(r * Real(factor));
}

MultiReal MultiReal::operator+(const MultiReal& o) const {
    MultiReal out = *this;
    out.add(o);
    return out;
}

MultiReal MultiReal::operator-() const {
    MultiReal out;
    for (const auto& t : terms_) out.add(-t);
    if (fuzz_) out.add(-*fuzz_);
    return out;
}

MultiReal MultiReal::operator-(const MultiReal& o) const { return *this + (-o); }

RatInterval MultiReal::enclosure(unsigned bits) const {
    RatInterval acc{BigRat(0)};
    for (const auto& t : terms_) {
        auto [lo, hi] = t.enclosure(bits);
        acc = acc + RatInterval(lo, hi);
    }
    if (fuzz_) acc = acc + *fuzz_;
    return acc;
}

int MultiReal::sign(Errc on_undecided) const {
    std::vector<const Surd*> live;
    for (const auto& t : terms_)
        if (!t.is_zero()) live.push_back(&t);
    if (!fuzz_) {
        if (live.empty()) return 0;
        if (live.size() == 1) return live.front()->sign();
        if (live.size() == 2 && (live[0]->is_rational() || live[1]->is_rational()))
            return (*live[0] + *live[1]).sign();
        // Distinct fields: the sum is nonzero, so refinement terminates.
        for (unsigned bits = 128; bits <= 16384; bits *= 2) {
            auto s = enclosure(bits).sign();
            if (s) return *s;
        }
        fail(Errc::invariant_violation, "cross-field sum failed to separate from zero");
    }
    for (unsigned bits = 128; bits <= 8192; bits *= 2) {
        auto s = enclosure(bits).sign();
        if (s) return *s;
    }
    fail(on_undecided, "sign undecidable at the certified precision");
}

BigInt MultiReal::floor(Errc on_undecided) const {
    if (!fuzz_) {
        std::vector<const Surd*> live;
        for (const auto& t : terms_)
            if (!t.is_zero()) live.push_back(&t);
        if (live.empty()) return 0;
        if (live.size() == 1) return live.front()->floor();
        if (live.size() == 2 && (live[0]->is_rational() || live[1]->is_rational()))
            return (*live[0] + *live[1]).floor();
        for (unsigned bits = 128; bits <= 16384; bits *= 2) {
            auto f = enclosure(bits).floor();
            if (f) return *f;
        }
        fail(Errc::invariant_violation, "cross-field floor failed to separate");
    }
    for (unsigned bits = 128; bits <= 8192; bits *= 2) {
        auto f = enclosure(bits).floor();
        if (f) return *f;
    }
    fail(on_undecided, "floor undecidable at the certified precision");
}

MultiReal MultiReal::frac(Errc on_undecided) const {
    MultiReal out = *this;
    out.add(Surd(-floor(on_undecided)));
    return out;
}

double MultiReal::to_double() const { return enclosure(128).midpoint().convert_to<double>(); }

}  // namespace cpn
