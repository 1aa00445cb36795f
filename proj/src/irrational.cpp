#include "cpn/irrational.hpp"

#include <cctype>
#include <cstdlib>
#include <utility>

#include "cpn/errors.hpp"

namespace cpn {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t at = s.find(sep, start);
        if (at == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, at - start));
        start = at + 1;
    }
}

bool is_integer_literal(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

BigInt parse_int(const std::string& s, const char* what) {
    if (!is_integer_literal(s)) fail(Errc::parse_error, std::string("expected integer for ") + what + ", got '" + s + "'");
    return BigInt(s);
}

std::vector<BigInt> parse_digit_list(const std::string& s, const char* what) {
    std::vector<BigInt> out;
    if (s.empty()) return out;
    for (const auto& piece : split(s, ',')) {
        BigInt v = parse_int(piece, what);
        if (v < 1) fail(Errc::parse_error, std::string(what) + " entries must be >= 1, got " + piece);
        out.push_back(std::move(v));
    }
    return out;
}

// Decimal literal -> exact rational.
BigRat parse_decimal_rational(const std::string& s) {
    std::string t = s;
    bool neg = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        neg = (t[0] == '-');
        t = t.substr(1);
    }
    auto dot = t.find('.');
    std::string ipart = (dot == std::string::npos) ? t : t.substr(0, dot);
    std::string fpart = (dot == std::string::npos) ? "" : t.substr(dot + 1);
    if (ipart.empty() && fpart.empty()) fail(Errc::parse_error, "empty decimal literal '" + s + "'");
    for (char c : ipart + fpart)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail(Errc::parse_error, "bad decimal literal '" + s + "'");
    BigInt num = ipart.empty() ? BigInt(0) : BigInt(ipart);
    BigInt den = 1;
    for (char c : fpart) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    BigRat r(num, den);
    return neg ? -r : r;
}

// Cylinder enclosure of [0; d_1, d_2, ...] from a finite certified prefix:
// the value lies between p_L/q_L and (p_L + p_{L-1})/(q_L + q_{L-1}).
RatInterval cylinder_interval(const std::vector<BigInt>& digits) {
    BigInt pm1 = 1, p0 = 0, qm1 = 0, q0 = 1;
    for (const auto& a : digits) {
        BigInt p1 = a * p0 + pm1;
        BigInt q1 = a * q0 + qm1;
        pm1 = p0; p0 = p1;
        qm1 = q0; q0 = q1;
    }
    BigRat end1(p0, q0);
    BigRat end2(p0 + pm1, q0 + qm1);
    if (end1 <= end2) return RatInterval(end1, end2);
    return RatInterval(end2, end1);
}

}  // namespace

Irrational Irrational::parse(const std::string& spec) {
    Irrational out;
    out.spec_ = spec;
    auto colon = spec.find(':');
    if (colon == std::string::npos) fail(Errc::parse_error, "missing kind prefix in '" + spec + "'");
    std::string kind = spec.substr(0, colon);
    std::string body = spec.substr(colon + 1);

    if (kind == "surd") {
        auto parts = split(body, ',');
        if (parts.size() != 4) fail(Errc::parse_error, "surd form needs p,q,d,r");
        BigInt p = parse_int(parts[0], "surd p");
        BigInt q = parse_int(parts[1], "surd q");
        BigInt d = parse_int(parts[2], "surd d");
        BigInt r = parse_int(parts[3], "surd r");
        if (d < 0) fail(Errc::parse_error, "surd radicand must be >= 0");
        if (r == 0) fail(Errc::parse_error, "surd denominator must be nonzero");
        Surd value(p, q, d, r);
        if (value.is_rational()) fail(Errc::not_irrational, "surd value " + value.to_string() + " is rational");
        out.kind_ = AlphaKind::surd;
        out.shift_ = value.floor();
        out.surd_ = value - Surd(out.shift_);
        return out;
    }

    if (kind == "cf") {
        auto digits = parse_digit_list(body, "cf digit");
        if (digits.empty()) fail(Errc::parse_error, "cf form needs at least one digit");
        out.kind_ = AlphaKind::cf_prefix;
        out.declared_digits_ = digits;
        out.horizon_ = static_cast<long>(digits.size());
        out.window_ = cylinder_interval(digits);
        return out;
    }

    if (kind == "cf-periodic") {
        auto semi = body.find(';');
        if (semi == std::string::npos) fail(Errc::parse_error, "cf-periodic form needs 'pre;(period)'");
        std::string pre_s = body.substr(0, semi);
        std::string per_s = body.substr(semi + 1);
        if (per_s.size() < 3 || per_s.front() != '(' || per_s.back() != ')')
            fail(Errc::parse_error, "cf-periodic period must be parenthesized");
        auto pre = parse_digit_list(pre_s, "cf-periodic digit");
        auto per = parse_digit_list(per_s.substr(1, per_s.size() - 2), "cf-periodic digit");
        if (per.empty()) fail(Errc::parse_error, "cf-periodic period must be nonempty");

        // Tail t = [b_1; b_2, ..., b_p, t] solves C t^2 + (D - A) t - B = 0
        // where [[A,B],[C,D]] is the product of the digit matrices [[b,1],[1,0]].
        BigInt A = 1, B = 0, C = 0, D = 1;
        for (const auto& b : per) {
            BigInt A2 = b * A + B, C2 = b * C + D;
            B = A; D = C;
            A = A2; C = C2;
        }
        BigInt disc = (A - D) * (A - D) + 4 * B * C;
        if (is_perfect_square(disc))
            fail(Errc::not_irrational, "periodic expansion '" + spec + "' describes a rational value");
        Surd t(A - D, 1, disc, 2 * C);
        if (!(Surd(1) < t)) fail(Errc::invariant_violation, "periodic tail not > 1");
        Surd v = t;
        for (auto it = pre.rbegin(); it != pre.rend(); ++it) v = Surd(*it) + v.inverse();
        out.kind_ = AlphaKind::periodic;
        out.surd_ = v.inverse();
        return out;
    }

    if (kind == "dec") {
        auto at = body.find('@');
        if (at == std::string::npos) fail(Errc::parse_error, "dec form needs '<literal>@<bits>'");
        BigRat r = parse_decimal_rational(body.substr(0, at));
        BigInt bits_i = parse_int(body.substr(at + 1), "dec bits");
        if (bits_i < 1 || bits_i > 1000000) fail(Errc::parse_error, "dec bits out of range");
        unsigned bits = static_cast<unsigned>(bits_i.convert_to<long>());
        BigRat eps(BigInt(1), BigInt(1) << bits);
        RatInterval win(r - eps, r + eps);

        BigInt flo = floor_rat(win.lo()), fhi = floor_rat(win.hi());
        if (flo != fhi)
            fail(Errc::not_in_unit_interval,
                 "decimal enclosure straddles an integer; cannot place the value in (0,1)");
        out.kind_ = AlphaKind::decimal;
        out.shift_ = flo;
        out.window_ = RatInterval(win.lo() - BigRat(flo), win.hi() - BigRat(flo));
        return out;
    }

    fail(Errc::parse_error, "unknown value kind '" + kind + "'");
}

Real Irrational::value() const {
    if (is_exact()) return Real(surd_);
    return Real(window_);
}

const Surd& Irrational::exact_value() const {
    if (!is_exact()) fail(Errc::precondition_unmet, "value is not exactly represented");
    return surd_;
}

Real parse_real_spec(const std::string& spec) {
    if (spec.find(':') == std::string::npos) {
        if (is_integer_literal(spec)) return Real(BigInt(spec));
        auto slash = spec.find('/');
        if (slash != std::string::npos) {
            std::string ns = spec.substr(0, slash), ds = spec.substr(slash + 1);
            if (!is_integer_literal(ns) || !is_integer_literal(ds))
                fail(Errc::parse_error, "bad fraction literal '" + spec + "'");
            BigInt den(ds);
            if (den == 0) fail(Errc::parse_error, "zero denominator in '" + spec + "'");
            return Real(BigRat(BigInt(ns), den));
        }
        if (spec.find('.') != std::string::npos) return Real(parse_decimal_rational(spec));
        fail(Errc::parse_error, "cannot parse real value '" + spec + "'");
    }
    Irrational irr = Irrational::parse(spec);
    return irr.value() + Real(irr.normalization_shift());
}

}  // namespace cpn
