#include "cpn/surd.hpp"

#include <sstream>

namespace cpn {

void Surd::canonicalize() {
    if (r_ == 0) fail(Errc::precondition_unmet, "surd with zero denominator");
    if (d_ < 0) fail(Errc::precondition_unmet, "surd with negative radicand");
    if (q_ == 0) {
        d_ = 0;
    } else if (d_ == 0) {
        q_ = 0;
    } else {
        BigInt s;
        BigInt f = square_free_part(d_, &s);
        d_ = f;
        q_ *= s;
        if (d_ == 1) {  // sqrt(1) folds into the rational part
            p_ += q_;
            q_ = 0;
            d_ = 0;
        }
    }
    if (r_ < 0) {
        r_ = -r_;
        p_ = -p_;
        q_ = -q_;
    }
    BigInt g = big_gcd(big_gcd(p_ < 0 ? BigInt(-p_) : p_, q_ < 0 ? BigInt(-q_) : q_), r_);
    if (g > 1) {
        p_ /= g;
        q_ /= g;
        r_ /= g;
    }
}

BigRat Surd::rational_value() const {
    if (!is_rational()) fail(Errc::precondition_unmet, "irrational surd has no rational value");
    return BigRat(p_, r_);
}

int Surd::sign() const {
    // sign of p + q*sqrt(d); r > 0 never flips it.
    if (q_ == 0) return p_ == 0 ? 0 : (p_ < 0 ? -1 : 1);
    if (p_ == 0) return q_ < 0 ? -1 : 1;
    if (p_ > 0 && q_ > 0) return 1;
    if (p_ < 0 && q_ < 0) return -1;
    // Opposite signs: compare p^2 against q^2 d. Equality would force d to be
    // a perfect square, excluded by canonical form.
    BigInt lhs = p_ * p_;
    BigInt rhs = q_ * q_ * d_;
    if (lhs == rhs) fail(Errc::invariant_violation, "non-canonical surd in sign computation");
    bool rational_dominates = lhs > rhs;
    if (p_ > 0) return rational_dominates ? 1 : -1;
    return rational_dominates ? -1 : 1;
}

BigInt Surd::field_of(const Surd& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    fail(Errc::mixed_field, "operands lie in distinct quadratic fields");
}

Surd Surd::operator-() const {
    Surd out = *this;
    out.p_ = -out.p_;
    out.q_ = -out.q_;
    return out;
}

Surd Surd::operator+(const Surd& o) const {
    BigInt d = field_of(o);
    return Surd(p_ * o.r_ + o.p_ * r_, q_ * o.r_ + o.q_ * r_, d, r_ * o.r_);
}

Surd Surd::operator-(const Surd& o) const { return *this + (-o); }

Surd Surd::operator*(const Surd& o) const {
    BigInt d = field_of(o);
    return Surd(p_ * o.p_ + q_ * o.q_ * d_, p_ * o.q_ + q_ * o.p_, d, r_ * o.r_);
}

Surd Surd::inverse() const {
    if (is_zero()) fail(Errc::precondition_unmet, "inverse of zero");
    // r / (p + q*sqrt(d)) = r (p - q*sqrt(d)) / (p^2 - q^2 d)
    BigInt norm = p_ * p_ - q_ * q_ * d_;
    return Surd(r_ * p_, -r_ * q_, d_, norm);
}

Surd Surd::operator/(const Surd& o) const { return *this * o.inverse(); }

int Surd::compare(const Surd& o) const { return (*this - o).sign(); }

BigInt Surd::floor() const {
    // Integer bracket for q*sqrt(d), then verify the candidate exactly;
    // irrational values never sit on the boundary, rationals use exact division.
    if (q_ == 0) return floor_div(p_, r_);
    BigInt s = isqrt(q_ * q_ * d_);
    BigInt approx_num = q_ > 0 ? BigInt(p_ + s) : BigInt(p_ - s);
    BigInt f = floor_div(approx_num, r_);
    while ((*this - Surd(f)).sign() < 0) --f;
    while ((*this - Surd(BigInt(f + 1))).sign() >= 0) ++f;
    return f;
}

std::pair<BigRat, BigRat> Surd::enclosure(unsigned bits) const {
    if (q_ == 0) return {BigRat(p_, r_), BigRat(p_, r_)};
    BigInt scale = BigInt(1) << bits;
    BigInt t = isqrt(q_ * q_ * d_ * scale * scale);  // floor(|q| sqrt(d) * 2^bits)
    BigInt lo_num, hi_num;
    if (q_ > 0) {
        lo_num = p_ * scale + t;
        hi_num = p_ * scale + t + 1;
    } else {
        lo_num = p_ * scale - t - 1;
        hi_num = p_ * scale - t;
    }
    return {BigRat(lo_num, r_ * scale), BigRat(hi_num, r_ * scale)};
}

double Surd::to_double() const {
    auto [lo, hi] = enclosure(80);
    return ((lo + hi) / 2).convert_to<double>();
}

std::string Surd::decimal(unsigned digits) const {
    int sgn = sign();
    Surd a = sgn < 0 ? -*this : *this;
    BigInt pow10 = 1;
    for (unsigned i = 0; i < digits; ++i) pow10 *= 10;
    BigInt scaled = (a * Surd(pow10)).floor();
    BigInt ip = scaled / pow10;
    BigInt fp = scaled % pow10;
    std::string frac = fp.str();
    if (frac.size() < digits) frac.insert(frac.begin(), digits - frac.size(), '0');
    std::string out = (sgn < 0 ? "-" : "") + ip.str();
    if (digits > 0) out += "." + frac;
    return out;
}

std::string Surd::to_string() const {
    if (q_ == 0) return r_ == 1 ? p_.str() : p_.str() + "/" + r_.str();
    std::ostringstream os;
    os << "(" << p_ << (q_ < 0 ? "-" : "+") << boost::multiprecision::abs(q_) << "*sqrt(" << d_ << "))/" << r_;
    return os.str();
}

}  // namespace cpn
