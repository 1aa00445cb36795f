#include "cpn/cps_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cpn {

namespace {

// Iterates all tuples over the inclusive ranges (an empty product yields one
// empty tuple), last coordinate fastest.
template <typename Fn>
void for_each_tuple(const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges, Fn&& fn) {
    std::vector<std::int64_t> tv(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) tv[i] = ranges[i].first;
    while (true) {
        fn(tv);
        std::size_t i = ranges.size();
        bool advanced = false;
        while (i > 0) {
            --i;
            if (tv[i] < ranges[i].second) {
                ++tv[i];
                advanced = true;
                break;
            }
            tv[i] = ranges[i].first;
        }
        if (!advanced) return;
    }
}

void validate_box(const NetConfig& cfg, const Box& box) {
    if (static_cast<long>(box.range.size()) != cfg.k - 1)
        fail(Errc::precondition_unmet, "box dimension does not match the net dimension");
    for (const auto& r : box.range)
        if (r.first > r.second) fail(Errc::precondition_unmet, "box range is empty");
}

std::string box_to_string(const Box& box) {
    std::string s;
    for (const auto& r : box.range) {
        if (!s.empty()) s += " x ";
        s += "[" + std::to_string(r.first) + "," + std::to_string(r.second) + "]";
    }
    return s;
}

// Transverse shift g = α_k + Σ_{i ≠ designated} n_i α_i, with the n-values
// taken from `tv` in coordinate order.
MultiReal transverse_shift(const NetConfig& cfg, const std::vector<std::int64_t>& tv) {
    MultiReal g;
    g.add(cfg.shift);
    std::size_t ti = 0;
    for (long i = 1; i <= cfg.k - 1; ++i) {
        if (i == cfg.designated) continue;
        g.add_scaled(cfg.slopes[static_cast<std::size_t>(i - 1)], BigInt(tv[ti++]));
    }
    return g;
}

// --- exact machine-word mirror of the fiber walk ---------------------------
//
// Every quantity the walk compares has the form (P + Q·√d1 + G·√d2)/R with a
// shared positive denominator R: the exact fiber coordinate v and all table
// data live in the quadratic field of the slope (radicand d1), while the
// transverse shift g contributes at most a rational part plus one extra
// radical √d2. The sign of such a number resolves with at most two integer
// squarings, which stay exact in __int128 as long as the coefficients stay
// under the plan budget. The planner refuses up front when that cannot be
// guaranteed, and any step that would leave the budget re-materialises the
// exact state and degrades to the certified route mid-walk, so the branch
// decisions are bit-identical either way.

int sign_i128(__int128 v) { return (v > 0) - (v < 0); }

// Sign of a + b·√d for non-square d ≥ 0; exact provided a² and d·b² fit.
int quad_sign_i128(__int128 a, __int128 b, std::int64_t d) {
    if (b == 0 || d == 0) return sign_i128(a);
    if (a == 0) return sign_i128(b);
    if ((a > 0) == (b > 0)) return a > 0 ? 1 : -1;
    const __int128 x = a * a;
    const __int128 y = static_cast<__int128>(d) * b * b;
    const int c = (x > y) - (x < y);
    return a > 0 ? c : -c;
}

// Sign of P + Q·√d1 + G·√d2 for distinct non-square radicands. Exact when
// |P|, |Q|, |G| ≤ 2^29 and d1, d2 ≤ 8: the squared resolvent below is then
// at most 17·2^58 in both coefficients and its own squares stay < 2^126.
int quad2_sign(std::int64_t P, std::int64_t Q, std::int64_t d1, std::int64_t G, std::int64_t d2) {
    if (G == 0) return quad_sign_i128(P, Q, d1);
    if (Q == 0) return quad_sign_i128(P, G, d2);
    const int sL = quad_sign_i128(P, Q, d1);
    const int sM = (G > 0) - (G < 0);
    if (sL == 0) return sM;
    if (sL == sM) return sL;
    // L = P + Q√d1 and G√d2 have opposite signs: compare L² with d2·G² by
    // taking the sign of (P² + d1·Q² − d2·G²) + 2PQ·√d1, times the sign of L.
    const __int128 A = static_cast<__int128>(P) * P + static_cast<__int128>(d1) * Q * Q -
                       static_cast<__int128>(d2) * G * G;
    const __int128 B = 2 * static_cast<__int128>(P) * Q;
    return sL * quad_sign_i128(A, B, d1);
}

struct FiberPlan {
    bool valid = false;
    std::int64_t d1 = 0, d2 = 0;
    std::int64_t lim = 0;                // per-coefficient magnitude budget
    std::int64_t R = 1;                  // shared positive denominator
    std::int64_t ap = 0, aq = 0;         // slope α
    std::int64_t lp = 0, lq = 0;         // window left endpoint
    std::int64_t dmp = 0, dmq = 0;       // D_m
    std::int64_t dm1p = 0, dm1q = 0;     // D_{m−1}
    std::int64_t gr = 0, g1 = 0, gc = 0; // g: rational, √d1 and √d2 parts
    std::int64_t cp[4] = {0, 0, 0, 0};   // g − c per threshold, collapsed so
    std::int64_t cq[4] = {0, 0, 0, 0};   // u < c ⇔ (v + cp/cq, gc) sign < 0
};

// Walks the n-solutions of n·α + g ∈ [left, left + len) (mod 1) for one
// window part J, in u-coordinates u = {n·α + g − left} with the window at
// [0, len). The table-field part v of u is kept exact; the constant g enters
// only through four certified 320-bit thresholds, with an exact multi-field
// sign as fallback, so every branch decision is certified and ties resolve
// by the half-open convention (u == threshold counts as "not less"). When
// all inputs fit the machine-word plan above, v and the thresholds are
// mirrored into int64 coefficients and every decision is an exact __int128
// sign cascade instead.
class FiberWalk {
  public:
    FiberWalk(const SpecialInterval& J, const MultiReal& g) : J_(&J), g_(&g) {
        const ConvergentTable& t = J.table();
        const long m = J.m();
        m_even_ = (m % 2 == 0);
        alpha_ = t.alpha_value();
        Dm_ = t.remainder(m);
        Dm1_ = t.remainder(m - 1);
        qm_ = checked_i64(t.q(m), "fiber gap q_m");
        qm1_ = checked_i64(t.q(m - 1), "fiber gap q_{m-1}");
        // Forward branch: the q_m-gap applies iff u < len − D_m (even m)
        // resp. u ≥ −D_m (odd m). Backward branch: the previous gap is
        // q_{m−1} iff u < |D_m| (even m), and q_m iff u < |D_{m−1}| (odd m).
        const Real len = J.length();
        c_[TH_LEN] = len;
        c_[TH_ONE] = Real(1);
        c_[TH_TAU] = m_even_ ? len - Dm_ : Real(0) - Dm_;
        c_[TH_SIG] = m_even_ ? Dm_ : Dm1_;
        build_plan();
        if (!plan_.valid) ensure_thr();
    }

    // Positions the walk at the first solution with n ≥ from (always found
    // within q_m + q_{m−1} + 1 steps).
    void seek(std::int64_t from) {
        n_ = from;
        fast_ = plan_.valid && seek_fast(from);
        if (!fast_) {
            ensure_thr();
            MultiReal w;
            w.add_scaled(alpha_, BigInt(from));
            w.add(*g_);
            w.add_scaled(J_->left(), BigInt(-1));
            const BigInt F = w.floor(Errc::undecidable_at_horizon);
            v_ = Real(BigInt(from)) * alpha_ - J_->left() - Real(F);
        }
        std::int64_t steps = 0;
        const std::int64_t cap = qm_ + qm1_ + 2;
        while (!u_less(TH_LEN)) {
            if (++steps > cap)
                fail(Errc::invariant_violation, "fiber entry exceeded the return-time bound");
            ++n_;
            if (fast_ && try_shift(plan_.ap, plan_.aq)) {
                if (!u_less(TH_ONE) && !try_shift(-plan_.R, 0)) v_ = v_ - Real(1);
            } else {
                v_ = v_ + alpha_;
                if (!u_less(TH_ONE)) v_ = v_ - Real(1);
            }
        }
    }

    std::int64_t n() const { return n_; }

    void forward() {
        if (u_less(TH_TAU) == m_even_) {
            if (!(fast_ && try_shift(plan_.dmp, plan_.dmq))) v_ = v_ + Dm_;
            n_ += qm_;
        } else {
            if (!(fast_ && try_shift(plan_.dm1p, plan_.dm1q))) v_ = v_ + Dm1_;
            n_ += qm1_;
        }
    }

    void backward() {
        if (u_less(TH_SIG) == m_even_) {
            if (!(fast_ && try_shift(-plan_.dm1p, -plan_.dm1q))) v_ = v_ - Dm1_;
            n_ -= qm1_;
        } else {
            if (!(fast_ && try_shift(-plan_.dmp, -plan_.dmq))) v_ = v_ - Dm_;
            n_ -= qm_;
        }
    }

  private:
    enum { TH_LEN = 0, TH_ONE = 1, TH_TAU = 2, TH_SIG = 3 };

    void ensure_thr() {
        if (thr_ready_) return;
        const RatInterval ge = g_->enclosure(320);
        for (int i = 0; i < 4; ++i) thr_approx_[i] = Real(c_[i].enclosure(320) - ge);
        thr_ready_ = true;
    }

    // Scales s = (p + q√d)/r onto the shared denominator; fails the plan on
    // a foreign radicand or a coefficient beyond the budget.
    bool put(const Surd& s, const BigInt& R, std::int64_t& P, std::int64_t& Q) const {
        if (s.d() != 0 && s.d() != plan_.d1) return false;
        const BigInt f = R / s.r();
        const BigInt p = BigInt(s.p() * f), q = BigInt(s.q() * f);
        if (abs(p) > plan_.lim || abs(q) > plan_.lim) return false;
        P = p.convert_to<std::int64_t>();
        Q = q.convert_to<std::int64_t>();
        return true;
    }

    void build_plan() {
        if (!alpha_.is_exact() || !Dm_.is_exact() || !Dm1_.is_exact() || g_->has_fuzz()) return;
        const Real& left = J_->left();
        if (!left.is_exact()) return;
        for (int i = 0; i < 4; ++i)
            if (!c_[i].is_exact()) return;
        if (alpha_.surd().d() == 0) return;
        BigInt d1 = alpha_.surd().d();
        BigInt d2(0);
        for (const Surd& term : g_->terms()) {
            if (term.d() == 0 || term.d() == d1) continue;
            if (d2 != 0 && term.d() != d2) return;
            d2 = term.d();
        }
        // Budgets keeping every sign test exact in __int128 (see quad2_sign).
        if (d2 != 0) {
            if (d1 > 8 || d2 > 8) return;
            plan_.lim = std::int64_t(1) << 28;
        } else {
            if (d1 > (1 << 20)) return;
            plan_.lim = std::int64_t(1) << 51;
        }
        plan_.d1 = d1.convert_to<std::int64_t>();
        plan_.d2 = d2.convert_to<std::int64_t>();
        BigInt R(1);
        const Surd* base[8] = {&alpha_.surd(), &left.surd(), &Dm_.surd(), &Dm1_.surd(),
                               &c_[0].surd(),  &c_[1].surd(), &c_[2].surd(), &c_[3].surd()};
        for (const Surd* s : base) R = boost::multiprecision::lcm(R, s->r());
        for (const Surd& term : g_->terms()) R = boost::multiprecision::lcm(R, term.r());
        if (R > plan_.lim) return;
        plan_.R = R.convert_to<std::int64_t>();
        if (!put(alpha_.surd(), R, plan_.ap, plan_.aq)) return;
        if (!put(left.surd(), R, plan_.lp, plan_.lq)) return;
        if (!put(Dm_.surd(), R, plan_.dmp, plan_.dmq)) return;
        if (!put(Dm1_.surd(), R, plan_.dm1p, plan_.dm1q)) return;
        BigInt gr(0), g1(0), gc(0);
        for (const Surd& term : g_->terms()) {
            const BigInt f = R / term.r();
            gr += term.p() * f;
            if (term.d() == d1)
                g1 += term.q() * f;
            else if (term.d() != 0)
                gc += term.q() * f;
        }
        if (abs(gr) > plan_.lim || abs(g1) > plan_.lim || abs(gc) > plan_.lim) return;
        plan_.gr = gr.convert_to<std::int64_t>();
        plan_.g1 = g1.convert_to<std::int64_t>();
        plan_.gc = gc.convert_to<std::int64_t>();
        std::int64_t tp = 0, tq = 0;
        for (int i = 0; i < 4; ++i) {
            if (!put(c_[i].surd(), R, tp, tq)) return;
            const std::int64_t p = plan_.gr - tp, q = plan_.g1 - tq;
            if (std::abs(p) > plan_.lim || std::abs(q) > plan_.lim) return;
            plan_.cp[i] = p;
            plan_.cq[i] = q;
        }
        plan_.valid = true;
    }

    // Loads the int64 state for a seek; refuses (→ certified route) when the
    // fold coefficients would leave the budget.
    bool seek_fast(std::int64_t from) {
        const std::int64_t lim = plan_.lim;
        const __int128 wp = static_cast<__int128>(from) * plan_.ap + plan_.gr - plan_.lp;
        const __int128 wq = static_cast<__int128>(from) * plan_.aq + plan_.g1 - plan_.lq;
        if (wp > lim || wp < -lim || wq > lim || wq < -lim) return false;
        // w = from·α + g − left; F = ⌊w⌋ from a float estimate, then fixed
        // up with exact signs (the estimate is within 1 at these sizes).
        const long double est =
            (static_cast<long double>(wp) + static_cast<long double>(wq) * sqrtl(plan_.d1) +
             static_cast<long double>(plan_.gc) * sqrtl(plan_.d2)) /
            static_cast<long double>(plan_.R);
        std::int64_t F = static_cast<std::int64_t>(floorl(est));
        for (int guard = 0;; ++guard) {
            if (guard > 4) return false;
            const __int128 hi = wp - (static_cast<__int128>(F) + 1) * plan_.R;
            if (hi > lim || hi < -lim) return false;
            if (quad2_sign(static_cast<std::int64_t>(hi), static_cast<std::int64_t>(wq), plan_.d1,
                           plan_.gc, plan_.d2) >= 0) {
                ++F;
                continue;
            }
            const __int128 lo = wp - static_cast<__int128>(F) * plan_.R;
            if (lo > lim || lo < -lim) return false;
            if (quad2_sign(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(wq), plan_.d1,
                           plan_.gc, plan_.d2) < 0) {
                --F;
                continue;
            }
            break;
        }
        const __int128 a = wp - plan_.gr - static_cast<__int128>(F) * plan_.R;
        const __int128 b = wq - plan_.g1;
        if (a > lim || a < -lim || b > lim || b < -lim) return false;
        fp_ = static_cast<std::int64_t>(a);
        fq_ = static_cast<std::int64_t>(b);
        return true;
    }

    // Applies v += (dp + dq√d1)/R on the int64 mirror; on a budget trip the
    // exact state is re-materialised, the walk degrades to the certified
    // route, and the caller applies the same shift there instead.
    bool try_shift(std::int64_t dp, std::int64_t dq) {
        const std::int64_t a = fp_ + dp, b = fq_ + dq;
        if (std::abs(a) > plan_.lim || std::abs(b) > plan_.lim) {
            v_ = Real(Surd(BigInt(fp_), BigInt(fq_), BigInt(plan_.d1), BigInt(plan_.R)));
            fast_ = false;
            ensure_thr();
            return false;
        }
        fp_ = a;
        fq_ = b;
        return true;
    }

    // Is u = v + g < c?  Exact int64 cascade on the fast route; otherwise a
    // certified-threshold compare with an exact multi-field sign on a tie.
    bool u_less(int which) const {
        if (fast_)
            return quad2_sign(fp_ + plan_.cp[which], fq_ + plan_.cq[which], plan_.d1, plan_.gc,
                              plan_.d2) < 0;
        try {
            return v_.less_than(thr_approx_[which], Errc::undecidable_at_horizon);
        } catch (const Error& e) {
            if (e.code() != Errc::undecidable_at_horizon) throw;
        }
        MultiReal s(v_);
        s.add(*g_);
        s.add_scaled(c_[which], BigInt(-1));
        return s.sign(Errc::undecidable_at_horizon) < 0;
    }

    const SpecialInterval* J_;
    const MultiReal* g_;
    bool m_even_ = false;
    Real alpha_, Dm_, Dm1_;
    std::int64_t qm_ = 0, qm1_ = 0;
    Real c_[4];
    Real thr_approx_[4];
    bool thr_ready_ = false;
    FiberPlan plan_;
    bool fast_ = false;
    std::int64_t fp_ = 0, fq_ = 0;  // v = (fp + fq√d1)/R while fast
    Real v_;
    std::int64_t n_ = 0;
};

std::int64_t fiber_part_count(const SpecialInterval& J, const MultiReal& g, std::int64_t lo,
                              std::int64_t hi) {
    if (lo > hi) return 0;
    FiberWalk w(J, g);
    w.seek(lo);
    std::int64_t c = 0;
    while (w.n() <= hi) {
        ++c;
        w.forward();
    }
    return c;
}

void fiber_part_collect(const SpecialInterval& J, const MultiReal& g, std::int64_t lo,
                        std::int64_t hi, std::vector<std::int64_t>& out) {
    if (lo > hi) return;
    FiberWalk w(J, g);
    w.seek(lo);
    while (w.n() <= hi) {
        out.push_back(w.n());
        w.forward();
    }
}

// Indexed solutions on one fiber, anchored at ℓ_0 = least non-negative one.
std::vector<FiberHit> fiber_hits_impl(const SpecialInterval& J, const MultiReal& g,
                                      std::int64_t lo, std::int64_t hi) {
    FiberWalk anchor(J, g);
    anchor.seek(0);
    const std::int64_t l0 = anchor.n();
    std::vector<FiberHit> down;
    if (lo < l0) {
        FiberWalk w = anchor;
        std::int64_t i = 0;
        while (true) {
            w.backward();
            --i;
            if (w.n() < lo) break;
            if (w.n() <= hi) down.push_back({i, w.n()});
        }
    }
    std::vector<FiberHit> out(down.rbegin(), down.rend());
    if (l0 <= hi) {
        FiberWalk w = anchor;
        std::int64_t i = 0;
        if (l0 >= lo) out.push_back({0, l0});
        while (true) {
            w.forward();
            ++i;
            if (w.n() > hi) break;
            if (w.n() >= lo) out.push_back({i, w.n()});
        }
    }
    return out;
}

// Ranges of the non-designated coordinates, in coordinate order.
std::vector<std::pair<std::int64_t, std::int64_t>> transverse_ranges(const NetConfig& cfg,
                                                                     const Box& box) {
    std::vector<std::pair<std::int64_t, std::int64_t>> r;
    for (long i = 1; i <= cfg.k - 1; ++i)
        if (i != cfg.designated) r.push_back(box.range[static_cast<std::size_t>(i - 1)]);
    return r;
}

void guard_fiber_product(const std::vector<std::pair<std::int64_t, std::int64_t>>& ranges) {
    __int128 fibers = 1;
    for (const auto& r : ranges) {
        fibers *= static_cast<__int128>(r.second - r.first + 1);
        if (fibers > 20000000)
            fail(Errc::precondition_unmet, "box has too many fibers to enumerate");
    }
}

std::int64_t count_box(const NetConfig& cfg, const std::vector<std::int64_t>& offset,
                       std::int64_t side) {
    Box box;
    for (std::int64_t o : offset) box.range.push_back({o, o + side - 1});
    validate_box(cfg, box);
    const auto ranges = transverse_ranges(cfg, box);
    guard_fiber_product(ranges);
    const auto des_range = box.range[static_cast<std::size_t>(cfg.designated - 1)];
    std::int64_t total = 0;
    for_each_tuple(ranges, [&](const std::vector<std::int64_t>& tv) {
        const MultiReal g = transverse_shift(cfg, tv);
        for (const SpecialInterval& J : cfg.window.parts())
            total += fiber_part_count(J, g, des_range.first, des_range.second);
    });
    return total;
}

}  // namespace

NetConfig make_net_config(const std::vector<std::string>& slope_specs,
                          const std::string& shift_spec, long designated, long depth,
                          const std::vector<std::pair<long, std::string>>& window_parts,
                          long multiplicity_bound) {
    const long k = static_cast<long>(slope_specs.size()) + 1;
    if (k < 2) fail(Errc::precondition_unmet, "net needs at least one slope");
    if (designated < 1 || designated > k - 1)
        fail(Errc::precondition_unmet, "designated slope index out of range");
    const std::string& des_spec = slope_specs[static_cast<std::size_t>(designated - 1)];
    if (des_spec.find(':') == std::string::npos)
        fail(Errc::precondition_unmet, "designated slope must be a certified irrational");
    Irrational irr = Irrational::parse(des_spec);
    TablePtr table = ConvergentTable::build(irr, ConvergentTable::available_depth(irr, depth));
    std::vector<Real> slopes;
    slopes.reserve(slope_specs.size());
    for (const std::string& s : slope_specs) slopes.push_back(parse_real_spec(s));
    Real shift = parse_real_spec(shift_spec);
    std::vector<SpecialInterval> parts;
    parts.reserve(window_parts.size());
    for (const auto& wp : window_parts)
        parts.push_back(make_interval(table, wp.first, Gamma::parse(wp.second)));
    WindowUnion window(std::move(parts), multiplicity_bound);
    if (!window.parts().empty() &&
        !window.total_length().less_than(Real(1), Errc::horizon_exceeded))
        fail(Errc::precondition_unmet, "window measure must be < 1");
    return NetConfig{k,     slope_specs,      std::move(slopes), shift_spec,
                     shift, designated,       std::move(table),  std::move(window)};
}

NetConfig load_net_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        fail(Errc::parse_error, std::string("bad net config JSON: ") + e.what());
    }
    try {
        const auto slopes = j.at("slopes").get<std::vector<std::string>>();
        const auto shift = j.value("shift", std::string("0"));
        const long designated = j.value("designated", 1L);
        const long depth = j.value("depth", 40L);
        const auto& w = j.at("window");
        const long bound = w.value("multiplicity_bound", 1L);
        std::vector<std::pair<long, std::string>> parts;
        for (const auto& p : w.at("parts"))
            parts.emplace_back(p.at("m").get<long>(), p.at("gamma").get<std::string>());
        return make_net_config(slopes, shift, designated, depth, parts, bound);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(Errc::parse_error, std::string("bad net config: ") + e.what());
    }
}

bool net_contains(const NetConfig& cfg, const NetPoint& n) {
    if (static_cast<long>(n.size()) != cfg.k - 1)
        fail(Errc::precondition_unmet, "net point dimension mismatch");
    MultiReal val;
    val.add(cfg.shift);
    for (std::size_t i = 0; i < n.size(); ++i)
        val.add_scaled(cfg.slopes[i], BigInt(n[i]));
    for (const SpecialInterval& J : cfg.window.parts()) {
        MultiReal rel = val;
        rel.add_scaled(J.left(), BigInt(-1));
        const BigInt F = rel.floor(Errc::undecidable_at_horizon);
        MultiReal u = rel;  // u − len = rel − F − len; inside iff negative
        u.add_scaled(Real(F), BigInt(-1));
        u.add_scaled(J.length(), BigInt(-1));
        if (u.sign(Errc::undecidable_at_horizon) < 0) return true;
    }
    return false;
}

std::vector<NetPoint> generate_net(const NetConfig& cfg, const Box& box) {
    validate_box(cfg, box);
    const auto ranges = transverse_ranges(cfg, box);
    guard_fiber_product(ranges);
    const auto des_range = box.range[static_cast<std::size_t>(cfg.designated - 1)];
    std::vector<NetPoint> out;
    for_each_tuple(ranges, [&](const std::vector<std::int64_t>& tv) {
        const MultiReal g = transverse_shift(cfg, tv);
        std::vector<std::int64_t> ns;
        for (const SpecialInterval& J : cfg.window.parts())
            fiber_part_collect(J, g, des_range.first, des_range.second, ns);
        std::sort(ns.begin(), ns.end());
        for (std::int64_t v : ns) {
            NetPoint p;
            p.reserve(static_cast<std::size_t>(cfg.k - 1));
            std::size_t ti = 0;
            for (long i = 1; i <= cfg.k - 1; ++i) {
                if (i == cfg.designated)
                    p.push_back(v);
                else
                    p.push_back(tv[ti++]);
            }
            out.push_back(std::move(p));
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FiberHit> fiber_indices(const NetConfig& cfg,
                                    const std::vector<std::int64_t>& transverse,
                                    std::int64_t lo, std::int64_t hi) {
    if (cfg.window.parts().size() != 1)
        fail(Errc::window_not_special, "fiber indexing needs a single special-interval window");
    if (static_cast<long>(transverse.size()) != cfg.k - 2)
        fail(Errc::precondition_unmet, "transverse tuple dimension mismatch");
    if (lo > hi) fail(Errc::precondition_unmet, "fiber range is empty");
    const MultiReal g = transverse_shift(cfg, transverse);
    return fiber_hits_impl(cfg.window.parts().front(), g, lo, hi);
}

BDReport bd_map(const NetConfig& cfg, const Box& box) {
    validate_box(cfg, box);
    if (cfg.window.parts().size() != 1)
        fail(Errc::window_not_special,
             "the bounded-displacement map needs a single special-interval window");
    const SpecialInterval& J = cfg.window.parts().front();
    const double len = J.length().to_double();
    const double invlen = 1.0 / len;

    BDReport rep;
    rep.box_desc = box_to_string(box);
    rep.target_lattice = "(1/|J|)Z" + (cfg.k > 2 ? " x Z^" + std::to_string(cfg.k - 2) : "") +
                         " with |J| = " + J.length().decimal(9);
    const auto ranges = transverse_ranges(cfg, box);
    guard_fiber_product(ranges);
    const auto des_range = box.range[static_cast<std::size_t>(cfg.designated - 1)];
    bool monotone = true;
    for_each_tuple(ranges, [&](const std::vector<std::int64_t>& tv) {
        const MultiReal g = transverse_shift(cfg, tv);
        const auto hits = fiber_hits_impl(J, g, des_range.first, des_range.second);
        for (std::size_t h = 0; h < hits.size(); ++h) {
            if (h > 0 && (hits[h].n1 <= hits[h - 1].n1 || hits[h].index != hits[h - 1].index + 1))
                monotone = false;
            const double disp =
                std::fabs(static_cast<double>(hits[h].n1) - static_cast<double>(hits[h].index) * invlen);
            if (disp > rep.sup_displacement) rep.sup_displacement = disp;
            if (rep.points < BDReport::displacement_cap) rep.displacements.push_back(disp);
            ++rep.points;
        }
    });
    if (rep.points > BDReport::displacement_cap) rep.displacements.clear();
    // Within a fiber the indices are consecutive and the solutions strictly
    // increase; across fibers the transverse coordinates (which the map
    // preserves) differ. Together that is injectivity.
    rep.injective = monotone;
    rep.ratio = rep.sup_displacement * len;
    return rep;
}

DensityDefect density_defect(const NetConfig& cfg, std::int64_t rho, double lambda, int samples,
                             std::uint64_t seed) {
    if (rho < 1) fail(Errc::precondition_unmet, "box side must be >= 1");
    if (!(lambda > 0)) fail(Errc::precondition_unmet, "density must be positive");
    if (samples < 1) fail(Errc::precondition_unmet, "need at least one sample box");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> off(-500000, 500000);
    DensityDefect out;
    out.rho = rho;
    out.lambda = lambda;
    const double volume = std::pow(static_cast<double>(rho), cfg.k - 1);
    for (int s = 0; s < samples; ++s) {
        std::vector<std::int64_t> offset(static_cast<std::size_t>(cfg.k - 1));
        for (auto& v : offset) v = off(rng);
        const std::int64_t cnt = count_box(cfg, offset, rho);
        const double defect = std::fabs(static_cast<double>(cnt) / (lambda * volume) - 1.0);
        out.boxes.push_back({offset, cnt, defect});
        if (defect > out.max_defect) out.max_defect = defect;
    }
    return out;
}

BKSums bk_partial_sums(const NetConfig& cfg, int T, int samples, std::uint64_t seed) {
    if (T < 1 || T > 40) fail(Errc::precondition_unmet, "dyadic exponent out of range");
    const double lambda = cfg.window.total_length().to_double();
    if (!(lambda > 0)) fail(Errc::precondition_unmet, "empty window has no density");
    BKSums out;
    double sum = 0.0;
    for (int t = 1; t <= T; ++t) {
        const DensityDefect d =
            density_defect(cfg, std::int64_t(1) << t, lambda, samples, seed + static_cast<std::uint64_t>(t));
        out.defects.push_back(d.max_defect);
        sum += d.max_defect;
        out.partial_sums.push_back(sum);
    }
    return out;
}

TruncationReport window_truncate(const std::vector<SpecialInterval>& intervals, long C,
                                 long tail_level) {
    if (intervals.empty()) fail(Errc::precondition_unmet, "truncation needs at least one interval");
    if (C < 1) fail(Errc::precondition_unmet, "multiplicity bound must be >= 1");
    if (tail_level < 1) fail(Errc::precondition_unmet, "tail level must be >= 1");
    const TablePtr& t0 = intervals.front().table_ptr();
    long prev_level = 0;
    long level_count = 0;
    for (const SpecialInterval& J : intervals) {
        if (J.table_ptr() != t0) fail(Errc::table_mismatch, "window intervals use different tables");
        if (J.m() < prev_level)
            fail(Errc::precondition_unmet, "intervals must be sorted by increasing level");
        if (J.m() == prev_level) {
            if (++level_count > C)
                fail(Errc::multiplicity_exceeded,
                     "more than " + std::to_string(C) + " intervals at level " +
                         std::to_string(J.m()));
        } else {
            prev_level = J.m();
            level_count = 1;
        }
    }
    const ConvergentTable& t = *t0;
    if (tail_level + 2 > t.depth())
        fail(Errc::depth_insufficient, "tail bound needs denominators up to level tail_level + 2");

    std::vector<SpecialInterval> kept;
    Real dropped(0);
    for (const SpecialInterval& J : intervals) {
        if (J.m() <= tail_level)
            kept.push_back(J);
        else
            dropped = dropped + J.length();
    }
    // |J(m, 0)| ≤ 1/q_m + 1/q_{m+1} and q_{m+2} ≥ 2 q_m give
    //   Σ_{m > ℓ} |J(m, 0)| ≤ 2 Σ_{m > ℓ} 1/q_m ≤ 4 (1/q_{ℓ+1} + 1/q_{ℓ+2}),
    // and at most C intervals per level multiply the bound by C.
    const BigRat tail = BigRat(BigInt(1), t.q(tail_level + 1)) + BigRat(BigInt(1), t.q(tail_level + 2));
    const Real bound{BigRat(BigRat(4 * C) * tail)};
    TruncationReport rep{WindowUnion(std::move(kept), C), tail_level, dropped, bound};
    if (rep.tail_bound.less_than(rep.dropped_measure))
        fail(Errc::invariant_violation, "dropped measure exceeds its certified tail bound");
    return rep;
}

BoxCountCheck box_count_check(const NetConfig& cfg, long K) {
    if (K < 1 || K > 40) fail(Errc::precondition_unmet, "dyadic exponent out of range");
    const std::int64_t side = std::int64_t(1) << K;
    const std::vector<std::int64_t> origin(static_cast<std::size_t>(cfg.k - 1), 0);
    BoxCountCheck chk;
    chk.K = K;
    chk.count = count_box(cfg, origin, side);
    const double measure = cfg.window.total_length().to_double();
    chk.main_term = std::pow(2.0, static_cast<double>((cfg.k - 1) * K)) * measure;
    chk.error = std::fabs(static_cast<double>(chk.count) - chk.main_term);
    chk.normalized = chk.error / (static_cast<double>(K) * std::pow(2.0, static_cast<double>((cfg.k - 2) * K)));
    return chk;
}

}  // namespace cpn
