#include "cpn/gap_blocks.hpp"

#include <cmath>

#include "cpn/errors.hpp"

namespace cpn {

AmEnumerator::AmEnumerator(TablePtr table, long m) : table_(std::move(table)), m_(m) {
    if (!table_) fail(Errc::precondition_unmet, "null table");
    if (m < 1 || m + 1 > table_->depth())
        fail(Errc::precondition_unmet, "need 1 <= m and table depth > m");
    qm_ = checked_i64(table_->q(m), "q_m");
    qm1_ = checked_i64(table_->q(m - 1), "q_{m-1}");
}

std::int64_t AmEnumerator::digit_bound(long j) const {
    long k = m_ + 1 + j;
    if (k > table_->depth())
        fail(Errc::depth_insufficient, "enumerator walked past the table depth");
    return table_->digit_i64(k);
}

char AmEnumerator::peek_symbol() const {
    // '2' exactly when the live digit is maximal; the distinction survives
    // even when q_m == q_{m-1} numerically (a_1 = 1, m = 1).
    bool maximal = !d_.empty() && d_[0] == digit_bound(0);
    return maximal ? '2' : '1';
}

std::int64_t AmEnumerator::peek_gap() const { return peek_symbol() == '2' ? qm1_ : qm_; }

void AmEnumerator::carry(long j) {
    // d_[j] was incremented. The only possible violation is the pair rule one
    // position up: d_[j+1] maximal forces d_[j] = 0; rewrite with
    // a_{i+2} q_{i+1} + q_i = q_{i+2} and propagate.
    while (static_cast<long>(d_.size()) > j + 1 && d_[j] > 0 &&
           d_[j + 1] == digit_bound(j + 1)) {
        d_[j] -= 1;
        d_[j + 1] = 0;
        long up = j + 2;
        if (static_cast<long>(d_.size()) <= up) d_.resize(up + 1, 0);
        d_[up] += 1;
        j = up;
    }
}

void AmEnumerator::step() {
    if (d_.empty()) d_.resize(1, 0);
    std::int64_t gap;
    if (d_[0] == digit_bound(0)) {
        // a_{m+1} q_m + q_{m-1} = q_{m+1}: bundle rolls over.
        gap = qm1_;
        d_[0] = 0;
        if (static_cast<long>(d_.size()) < 2) d_.resize(2, 0);
        d_[1] += 1;
        carry(1);
    } else {
        gap = qm_;
        d_[0] += 1;
        carry(0);
    }
    n_ += gap;
    ++index_;
}

std::vector<std::int64_t> enumerate_Am(TablePtr table, long m, std::int64_t limit) {
    AmEnumerator e(std::move(table), m);
    std::vector<std::int64_t> out;
    while (e.current() <= limit) {
        out.push_back(e.current());
        e.step();
    }
    return out;
}

std::string block(TablePtr table, long m, long i, std::size_t max_len) {
    if (!table) fail(Errc::precondition_unmet, "null table");
    if (i < -1) fail(Errc::precondition_unmet, "block level must be >= -1");
    if (m < 1 || m + i > table->depth())
        fail(Errc::depth_insufficient, "block level needs table digits up to m+i");
    if (i == -1) return "2";
    if (i == 0) return "1";
    std::string prev2 = "2", prev1 = "1";
    for (long lvl = 1; lvl <= i; ++lvl) {
        std::int64_t a = table->digit_i64(m + lvl);
        // Division form so the size check itself cannot overflow.
        if (prev2.size() > max_len ||
            static_cast<std::size_t>(a) > (max_len - prev2.size()) / prev1.size())
            fail(Errc::precondition_unmet, "block exceeds the materialization cap");
        std::string cur;
        cur.reserve(prev1.size() * static_cast<std::size_t>(a) + prev2.size());
        for (std::int64_t rep = 0; rep < a; ++rep) cur += prev1;
        cur += prev2;
        prev2 = std::move(prev1);
        prev1 = std::move(cur);
    }
    return prev1;
}

BlockStats block_stats(TablePtr table, long m, long i) {
    if (!table) fail(Errc::precondition_unmet, "null table");
    if (i < -1) fail(Errc::precondition_unmet, "block level must be >= -1");
    if (m < 1 || m + i > table->depth())
        fail(Errc::depth_insufficient, "block level needs table digits up to m+i");
    BigInt s2 = 0, r2 = 1;  // B_{-1}
    BigInt s1 = 1, r1 = 0;  // B_0
    if (i == -1) {
        std::swap(s1, s2);
        std::swap(r1, r2);
    }
    for (long lvl = 1; lvl <= i; ++lvl) {
        BigInt s = table->digit(m + lvl) * s1 + s2;
        BigInt r = table->digit(m + lvl) * r1 + r2;
        s2 = s1; r2 = r1;
        s1 = s; r1 = r;
    }
    BlockStats st;
    st.ones = s1;
    st.twos = r1;
    st.length = s1 + r1;
    st.combined = s1 * table->q(m) + r1 * table->q(m - 1);
    if (st.combined != table->q(m + i))
        fail(Errc::invariant_violation, "block counts do not recombine to q_{m+i}");
    return st;
}

std::vector<std::pair<long, long>> decompose_prefix(TablePtr table, long m, std::int64_t M) {
    if (!table) fail(Errc::precondition_unmet, "null table");
    if (M < 1) fail(Errc::precondition_unmet, "prefix length must be >= 1");
    const ConvergentTable& t = *table;
    // Block lengths |B_i| while they fit below M (plus one extra as the cap).
    std::vector<std::int64_t> len{1, 1};  // |B_{-1}|, |B_0| at indices 0,1
    long top = 0;
    while (len.back() <= M) {
        long lvl = top + 1;
        if (m + lvl > t.depth())
            fail(Errc::depth_insufficient, "prefix decomposition needs deeper digits");
        std::int64_t a = t.digit_i64(m + lvl);
        // Clamp to M+1 (enough to stop the loop) so huge digits cannot overflow.
        __int128 next = static_cast<__int128>(a) * len[lvl] + len[lvl - 1];
        len.push_back(next > M ? M + 1 : static_cast<std::int64_t>(next));
        top = lvl;
    }
    std::vector<std::pair<long, long>> out;
    std::int64_t rem = M;
    for (long lvl = top - 1; lvl >= 0 && rem > 0; --lvl) {
        std::int64_t blen = len[lvl + 1];
        if (blen > rem) continue;
        std::int64_t d = rem / blen;
        std::int64_t cap = t.digit_i64(m + lvl + 1);
        if (d > cap) d = cap;
        out.emplace_back(lvl, static_cast<long>(d));
        rem -= d * blen;
    }
    if (rem != 0) fail(Errc::invariant_violation, "greedy block decomposition left a remainder");
    return out;
}

namespace {

Real density_exact(const ConvergentTable& t, long m) {
    return t.abs_remainder(m - 1) + t.abs_remainder(m);
}

}  // namespace

Real counting_residual(TablePtr table, long m, std::int64_t M) {
    if (M < 0) fail(Errc::precondition_unmet, "gap count must be >= 0");
    AmEnumerator e(table, m);
    for (std::int64_t i = 0; i < M; ++i) e.step();
    Real len = density_exact(*table, m);
    return Real(BigInt(M)) - Real(BigInt(e.current())) * len;
}

ResidualScan scan_residual(TablePtr table, long m, std::int64_t M_max,
                           std::int64_t snapshot_every) {
    if (M_max < 1) fail(Errc::precondition_unmet, "scan length must be >= 1");
    if (snapshot_every < 1) fail(Errc::precondition_unmet, "snapshot stride must be >= 1");
    AmEnumerator e(table, m);
    Real len = density_exact(*table, m);
    double len_d = len.to_double();

    ResidualScan scan;
    scan.m = m;
    scan.density = len_d;
    double r = 0.0, prefix_max = 0.0;
    for (std::int64_t M = 1; M <= M_max; ++M) {
        std::int64_t gap = e.peek_gap();
        e.step();
        r += 1.0 - static_cast<double>(gap) * len_d;
        if (std::fabs(r) > prefix_max) prefix_max = std::fabs(r);
        if (M % snapshot_every == 0 || M == M_max) {
            // Resynchronize against the exact residual to stop drift.
            Real exact = Real(BigInt(M)) - Real(BigInt(e.current())) * len;
            r = exact.to_double();
            scan.rows.push_back(ResidualRow{M, e.current(), r, prefix_max});
        }
    }
    scan.max_abs = prefix_max;
    return scan;
}

}  // namespace cpn
