#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cpn/cps_net.hpp"
#include "test_util.hpp"

using namespace cpn;
using cpn::test::errc_of;

namespace {

const std::string kGolden = "surd:-1,1,5,2";  // (sqrt5 - 1)/2
const std::string kRoot2 = "surd:-1,1,2,1";   // sqrt2 - 1
const std::string kPhi = "surd:1,1,5,2";      // (1 + sqrt5)/2

NetConfig golden_net_k2(const std::string& shift, long m = 2, const std::string& gamma = "0") {
    return make_net_config({kGolden}, shift, 1, 30, {{m, gamma}}, 1);
}

NetConfig mixed_net_k3(const std::string& shift, long m = 2, const std::string& gamma = "0") {
    return make_net_config({kGolden, kRoot2}, shift, 1, 30, {{m, gamma}}, 1);
}

std::vector<std::int64_t> first_coords(const std::vector<NetPoint>& pts) {
    std::vector<std::int64_t> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(p[0]);
    return out;
}

// Exact equality of two reals.
bool req(const Real& x, const Real& y) { return (x - y).sign() == 0; }

}  // namespace

TEST_CASE("one-dimensional net with zero shift reproduces the level-2 hit set") {
    NetConfig cfg = golden_net_k2("0");
    Box box{{{0, 10}}};
    const auto pts = generate_net(cfg, box);
    CHECK(first_coords(pts) == std::vector<std::int64_t>{0, 2, 3, 5, 7, 8, 10});
    for (const auto& p : pts) CHECK(net_contains(cfg, p));
    CHECK_FALSE(net_contains(cfg, {1}));
    CHECK_FALSE(net_contains(cfg, {4}));
}

TEST_CASE("a slope outside the unit interval is reduced mod 1") {
    NetConfig a = golden_net_k2("1/3");
    NetConfig b = make_net_config({kPhi}, "1/3", 1, 30, {{2, "0"}}, 1);
    Box box{{{-15, 15}}};
    CHECK(generate_net(a, box) == generate_net(b, box));
    for (std::int64_t n = -15; n <= 15; ++n)
        CHECK(net_contains(a, {n}) == net_contains(b, {n}));
}

TEST_CASE("empty window gives the empty net") {
    NetConfig cfg = make_net_config({kGolden}, "1/3", 1, 30, {}, 1);
    CHECK(generate_net(cfg, Box{{{-100, 100}}}).empty());
    CHECK_FALSE(net_contains(cfg, {0}));
    CHECK_FALSE(net_contains(cfg, {17}));
}

TEST_CASE("generation agrees with pointwise membership, one dimension") {
    for (const char* shift : {"0", "1/3", "-2/7"}) {
        NetConfig cfg = golden_net_k2(shift, 3, "1/2");
        Box box{{{-25, 25}}};
        const auto pts = generate_net(cfg, box);
        std::vector<std::int64_t> brute;
        for (std::int64_t n = -25; n <= 25; ++n)
            if (net_contains(cfg, {n})) brute.push_back(n);
        CHECK(first_coords(pts) == brute);
        CHECK_FALSE(brute.empty());
    }
}

TEST_CASE("generation agrees with pointwise membership, two dimensions mixed fields") {
    NetConfig cfg = mixed_net_k3("1/7");
    Box box{{{-6, 6}, {-6, 6}}};
    const auto pts = generate_net(cfg, box);
    std::vector<NetPoint> brute;
    for (std::int64_t n1 = -6; n1 <= 6; ++n1)
        for (std::int64_t n2 = -6; n2 <= 6; ++n2)
            if (net_contains(cfg, {n1, n2})) brute.push_back({n1, n2});
    CHECK(pts == brute);  // both lexicographic
    CHECK(pts.size() > 50);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
}

TEST_CASE("generation with the designated slope in second position") {
    NetConfig cfg = make_net_config({kRoot2, kGolden}, "1/7", 2, 30, {{2, "0"}}, 1);
    Box box{{{-5, 5}, {-5, 5}}};
    const auto pts = generate_net(cfg, box);
    std::vector<NetPoint> brute;
    for (std::int64_t n1 = -5; n1 <= 5; ++n1)
        for (std::int64_t n2 = -5; n2 <= 5; ++n2)
            if (net_contains(cfg, {n1, n2})) brute.push_back({n1, n2});
    CHECK(pts == brute);
    CHECK_FALSE(pts.empty());
}

TEST_CASE("generation with an enclosure-backed transverse slope") {
    NetConfig cfg = make_net_config({kGolden, "dec:0.7182818284590452353602874713@93"}, "0", 1, 30,
                                    {{2, "0"}}, 1);
    Box box{{{-5, 5}, {-5, 5}}};
    const auto pts = generate_net(cfg, box);
    std::vector<NetPoint> brute;
    for (std::int64_t n1 = -5; n1 <= 5; ++n1)
        for (std::int64_t n2 = -5; n2 <= 5; ++n2)
            if (net_contains(cfg, {n1, n2})) brute.push_back({n1, n2});
    CHECK(pts == brute);
    CHECK_FALSE(pts.empty());
}

TEST_CASE("net density matches the window measure on a large box") {
    NetConfig cfg = mixed_net_k3("0");
    Box box{{{0, 100}, {0, 100}}};
    const auto pts = generate_net(cfg, box);
    const double len = cfg.window.total_length().to_double();
    const double expected = 101.0 * 101.0 * len;
    // Each of the 101 fibers misses its share by less than 2.
    CHECK(std::fabs(static_cast<double>(pts.size()) - expected) < 2.0 * 101.0);
}

TEST_CASE("the net is separated and relatively dense") {
    NetConfig cfg = mixed_net_k3("1/7");
    const auto pts = generate_net(cfg, Box{{{-3, 48}, {-8, 8}}});
    REQUIRE(pts.size() > 100);
    auto dist = [](const NetPoint& a, const NetPoint& b) {
        std::int64_t d = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            d = std::max<std::int64_t>(d, std::llabs(a[i] - b[i]));
        return d;
    };
    // Distinct lattice points are 1 apart, so separation is automatic; the
    // interesting half is the covering radius: every lattice point in the
    // interior is within sup-distance 1 of a net point (fiber gaps are q_1=1
    // and q_2=2, so nothing is farther than 1 from a hit along its own fiber).
    for (std::int64_t x = 0; x <= 45; ++x)
        for (std::int64_t y = -8; y <= 8; ++y) {
            std::int64_t best = 1000;
            const NetPoint probe{x, y};
            for (const auto& p : pts) best = std::min(best, dist(probe, p));
            CHECK(best <= 1);
        }
}

TEST_CASE("per-fiber counts are uniform across fibers") {
    NetConfig cfg = mixed_net_k3("1/7");
    const double len = cfg.window.total_length().to_double();
    for (std::int64_t t = -5; t <= 5; ++t) {
        const auto hits = fiber_indices(cfg, {t}, 0, 100);
        CHECK(std::fabs(static_cast<double>(hits.size()) - 101.0 * len) <= 3.0);
    }
}

TEST_CASE("fiber solutions are two-gap sequences with consecutive indices") {
    NetConfig cfg = golden_net_k2("0");
    const auto hits = fiber_indices(cfg, {}, 0, 30);
    REQUIRE(!hits.empty());
    CHECK(hits.front().index == 0);
    CHECK(hits.front().n1 == 0);  // 0 is a solution, so it is the anchor
    for (std::size_t i = 1; i < hits.size(); ++i) {
        CHECK(hits[i].index == hits[i - 1].index + 1);
        const std::int64_t gap = hits[i].n1 - hits[i - 1].n1;
        CHECK((gap == 1 || gap == 2));  // q_1 and q_2 for the golden table
    }
    CHECK(first_coords(generate_net(cfg, Box{{{0, 30}}})) == [&] {
        std::vector<std::int64_t> ns;
        for (const auto& h : hits) ns.push_back(h.n1);
        return ns;
    }());
}

TEST_CASE("fiber indexing is anchored at the least non-negative solution") {
    NetConfig cfg = golden_net_k2("1/3", 3, "1/2");
    const auto hits = fiber_indices(cfg, {}, -30, 30);
    REQUIRE(!hits.empty());
    std::vector<std::int64_t> brute;
    for (std::int64_t n = -30; n <= 30; ++n)
        if (net_contains(cfg, {n})) brute.push_back(n);
    std::vector<std::int64_t> ns;
    std::int64_t anchor_n = -1;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        ns.push_back(hits[i].n1);
        if (i > 0) CHECK(hits[i].index == hits[i - 1].index + 1);
        if (hits[i].index == 0) anchor_n = hits[i].n1;
        if (hits[i].index < 0) CHECK(hits[i].n1 < 0);
        if (hits[i].index >= 0) CHECK(hits[i].n1 >= 0);
    }
    CHECK(ns == brute);
    // index 0 is the least non-negative solution
    REQUIRE(anchor_n >= 0);
    for (std::int64_t n = 0; n < anchor_n; ++n) CHECK_FALSE(net_contains(cfg, {n}));
}

TEST_CASE("fiber indices are stable under range extension") {
    NetConfig cfg = golden_net_k2("-2/7");
    std::map<std::int64_t, std::int64_t> wide;
    for (const auto& h : fiber_indices(cfg, {}, -40, 40)) wide[h.index] = h.n1;
    for (const auto& h : fiber_indices(cfg, {}, -12, 12)) {
        REQUIRE(wide.count(h.index) == 1);
        CHECK(wide[h.index] == h.n1);
    }
}

TEST_CASE("fiber indexing through a transverse coordinate") {
    NetConfig cfg = mixed_net_k3("1/7");
    const auto hits = fiber_indices(cfg, {2}, -15, 15);
    std::vector<std::int64_t> brute;
    for (std::int64_t n = -15; n <= 15; ++n)
        if (net_contains(cfg, {n, 2})) brute.push_back(n);
    std::vector<std::int64_t> ns;
    for (const auto& h : hits) ns.push_back(h.n1);
    CHECK(ns == brute);
    for (std::size_t i = 1; i < hits.size(); ++i) {
        const std::int64_t gap = hits[i].n1 - hits[i - 1].n1;
        CHECK((gap == 1 || gap == 2));
    }
}

TEST_CASE("fiber indexing preconditions") {
    NetConfig two_parts = make_net_config({kGolden}, "0", 1, 30, {{2, "0"}, {4, "1/2"}}, 1);
    CHECK(errc_of([&] { fiber_indices(two_parts, {}, 0, 10); }) == Errc::window_not_special);

    NetConfig cfg = golden_net_k2("0");
    CHECK(errc_of([&] { fiber_indices(cfg, {1}, 0, 10); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { fiber_indices(cfg, {}, 5, 4); }) == Errc::precondition_unmet);
}

TEST_CASE("displacement map onto the rescaled lattice stays bounded") {
    NetConfig cfg = golden_net_k2("0");
    const BDReport small = bd_map(cfg, Box{{{0, 2000}}});
    CHECK(small.injective);
    CHECK(small.points == static_cast<std::int64_t>(generate_net(cfg, Box{{{0, 2000}}}).size()));
    CHECK(small.displacements.size() == static_cast<std::size_t>(small.points));
    CHECK(small.sup_displacement > 0.1);
    CHECK(small.sup_displacement < 2.0);
    CHECK(small.ratio == doctest::Approx(small.sup_displacement *
                                         cfg.window.total_length().to_double()));

    const BDReport large = bd_map(cfg, Box{{{0, 40000}}});
    CHECK(large.injective);
    CHECK(large.sup_displacement >= small.sup_displacement);
    CHECK(large.sup_displacement < 2.0);  // bounded displacement, not growing with the box
}

TEST_CASE("displacement map in two dimensions") {
    NetConfig cfg = mixed_net_k3("1/7");
    const BDReport rep = bd_map(cfg, Box{{{-40, 40}, {-10, 10}}});
    CHECK(rep.injective);
    CHECK(rep.points > 500);
    CHECK(rep.sup_displacement < 2.0);
    CHECK(rep.target_lattice.find("Z^1") != std::string::npos);

    NetConfig two_parts = make_net_config({kGolden}, "0", 1, 30, {{2, "0"}, {4, "1/2"}}, 1);
    CHECK(errc_of([&] { bd_map(two_parts, Box{{{0, 10}}}); }) == Errc::window_not_special);
}

TEST_CASE("sampled density defect is small at the true density and large off it") {
    NetConfig cfg = golden_net_k2("0");
    const double len = cfg.window.total_length().to_double();
    const DensityDefect good = density_defect(cfg, 4096, len, 4, 12345);
    CHECK(good.boxes.size() == 4);
    CHECK(good.max_defect < 0.05);
    for (const auto& b : good.boxes) {
        CHECK(b.defect <= good.max_defect);
        CHECK(b.count > 0);
    }
    // Doubling the claimed density halves every ratio: defect near 1/2.
    const DensityDefect off = density_defect(cfg, 4096, 2.0 * len, 4, 12345);
    CHECK(off.max_defect == doctest::Approx(0.5).epsilon(0.05));

    // Same seed, same boxes.
    const DensityDefect again = density_defect(cfg, 4096, len, 4, 12345);
    REQUIRE(again.boxes.size() == good.boxes.size());
    for (std::size_t i = 0; i < good.boxes.size(); ++i) {
        CHECK(again.boxes[i].offset == good.boxes[i].offset);
        CHECK(again.boxes[i].count == good.boxes[i].count);
    }

    CHECK(errc_of([&] { density_defect(cfg, 0, len, 4, 1); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { density_defect(cfg, 8, 0.0, 4, 1); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { density_defect(cfg, 8, len, 0, 1); }) == Errc::precondition_unmet);
}

TEST_CASE("density defects shrink along dyadic box sides") {
    NetConfig cfg = golden_net_k2("0");
    const BKSums bk = bk_partial_sums(cfg, 12, 3, 777);
    REQUIRE(bk.defects.size() == 12);
    REQUIRE(bk.partial_sums.size() == 12);
    double sum = 0.0;
    for (std::size_t t = 0; t < 12; ++t) {
        sum += bk.defects[t];
        CHECK(bk.partial_sums[t] == doctest::Approx(sum));
        if (t > 0) CHECK(bk.partial_sums[t] >= bk.partial_sums[t - 1]);
    }
    CHECK(bk.defects.back() < 0.02);
    CHECK(bk.defects.back() < bk.defects.front());

    NetConfig empty = make_net_config({kGolden}, "0", 1, 30, {}, 1);
    CHECK(errc_of([&] { bk_partial_sums(empty, 3, 2, 1); }) == Errc::precondition_unmet);
}

TEST_CASE("window truncation certifies the dropped tail measure") {
    TablePtr t = ConvergentTable::build(Irrational::parse(kGolden), 30);
    std::vector<SpecialInterval> parts{make_interval(t, 2, Gamma::parse("0")),
                                       make_interval(t, 4, Gamma::parse("0")),
                                       make_interval(t, 6, Gamma::parse("0"))};
    const TruncationReport rep = window_truncate(parts, 1, 2);
    CHECK(rep.tail_level == 2);
    REQUIRE(rep.kept.parts().size() == 1);
    CHECK(rep.kept.parts().front().m() == 2);
    CHECK(req(rep.dropped_measure, parts[1].length() + parts[2].length()));
    CHECK(rep.dropped_measure.less_than(rep.tail_bound));
    // 4 (1/q_3 + 1/q_4) for the golden table: 4 (1/3 + 1/5) = 32/15.
    CHECK(req(rep.tail_bound, Real(BigRat(32, 15))));

    // Keeping every level needs pairwise-disjoint parts, hence the translates.
    std::vector<SpecialInterval> spread{make_interval(t, 2, Gamma::parse("0")),
                                        make_interval(t, 4, Gamma::parse("1/2")),
                                        make_interval(t, 6, Gamma::parse("7/10"))};
    const TruncationReport keep_all = window_truncate(spread, 1, 6);
    CHECK(keep_all.kept.parts().size() == 3);
    CHECK(keep_all.dropped_measure.sign() == 0);
    // golden q_7 = 21, q_8 = 34: bound 4 (1/21 + 1/34) = 110/357
    CHECK(req(keep_all.tail_bound, Real(BigRat(110, 357))));

    const TruncationReport drop_all = window_truncate({parts[1], parts[2]}, 1, 2);
    CHECK(drop_all.kept.parts().empty());
    CHECK(req(drop_all.dropped_measure, parts[1].length() + parts[2].length()));
}

TEST_CASE("window truncation validates its input list") {
    TablePtr t = ConvergentTable::build(Irrational::parse(kGolden), 30);
    TablePtr t2 = ConvergentTable::build(Irrational::parse(kRoot2), 30);
    const SpecialInterval j2 = make_interval(t, 2, Gamma::parse("0"));
    const SpecialInterval j4 = make_interval(t, 4, Gamma::parse("0"));

    CHECK(errc_of([&] { window_truncate({}, 1, 2); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { window_truncate({j2}, 0, 2); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { window_truncate({j2}, 1, 0); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { window_truncate({j4, j2}, 1, 4); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { window_truncate({j2, j2}, 1, 2); }) == Errc::multiplicity_exceeded);
    CHECK(errc_of([&] {
              window_truncate({j2, make_interval(t2, 4, Gamma::parse("0"))}, 1, 2);
          }) == Errc::table_mismatch);

    // Two disjoint translates on one level pass with C = 2.
    const SpecialInterval a = make_interval(t, 3, Gamma::parse("0"));
    const SpecialInterval b = make_interval(t, 3, Gamma::parse("1-a"));
    const TruncationReport rep = window_truncate({a, b}, 2, 3);
    CHECK(rep.kept.parts().size() == 2);

    TablePtr shallow = ConvergentTable::build(Irrational::parse(kGolden), 6);
    const SpecialInterval sj = make_interval(shallow, 2, Gamma::parse("0"));
    CHECK(errc_of([&] { window_truncate({sj}, 1, 5); }) == Errc::depth_insufficient);
}

TEST_CASE("dyadic box counts track the volume term") {
    NetConfig cfg = mixed_net_k3("0");
    const double measure = cfg.window.total_length().to_double();
    for (long K : {5L, 7L}) {
        const BoxCountCheck chk = box_count_check(cfg, K);
        CHECK(chk.K == K);
        CHECK(chk.count > 0);
        CHECK(chk.main_term ==
              doctest::Approx(std::pow(2.0, static_cast<double>(2 * K)) * measure));
        CHECK(chk.error == doctest::Approx(std::fabs(static_cast<double>(chk.count) - chk.main_term)));
        CHECK(chk.normalized ==
              doctest::Approx(chk.error / (static_cast<double>(K) * std::pow(2.0, static_cast<double>(K)))));
        CHECK(chk.normalized < 1.0);
    }
    NetConfig line = golden_net_k2("0");
    const BoxCountCheck chk = box_count_check(line, 10);
    CHECK(chk.normalized < 1.0);
    CHECK(errc_of([&] { box_count_check(line, 0); }) == Errc::precondition_unmet);
}

TEST_CASE("net config validation") {
    CHECK(errc_of([] { make_net_config({}, "0", 1, 30, {}, 1); }) == Errc::precondition_unmet);
    CHECK(errc_of([] { make_net_config({kGolden}, "0", 0, 30, {}, 1); }) ==
          Errc::precondition_unmet);
    CHECK(errc_of([] { make_net_config({kGolden}, "0", 2, 30, {}, 1); }) ==
          Errc::precondition_unmet);
    // designated slope must be a certified irrational, not a rational literal
    CHECK(errc_of([] { make_net_config({"1/3", kGolden}, "0", 1, 30, {{2, "0"}}, 1); }) ==
          Errc::precondition_unmet);
    // the full-circle window has measure 1, which a net rejects
    CHECK(errc_of([] { make_net_config({kGolden}, "0", 1, 30, {{1, "0"}}, 1); }) ==
          Errc::precondition_unmet);
}

TEST_CASE("net config from JSON") {
    const std::string text = R"({
        "slopes": ["surd:-1,1,5,2"],
        "shift": "1/3",
        "designated": 1,
        "depth": 30,
        "window": {"multiplicity_bound": 1, "parts": [{"m": 2, "gamma": "0"}]}
    })";
    NetConfig a = load_net_config(text);
    NetConfig b = golden_net_k2("1/3");
    Box box{{{-20, 20}}};
    CHECK(generate_net(a, box) == generate_net(b, box));

    // defaults: shift 0, designated 1
    NetConfig c = load_net_config(
        R"({"slopes": ["surd:-1,1,5,2"], "window": {"parts": [{"m": 2, "gamma": "0"}]}})");
    CHECK(generate_net(c, Box{{{0, 10}}}) == generate_net(golden_net_k2("0"), Box{{{0, 10}}}));

    CHECK(errc_of([] { load_net_config("not json"); }) == Errc::parse_error);
    CHECK(errc_of([] { load_net_config(R"({"shift": "0"})"); }) == Errc::parse_error);
    CHECK(errc_of([] { load_net_config(R"({"slopes": ["surd:-1,1,5,2"]})"); }) ==
          Errc::parse_error);
    CHECK(errc_of([] {
              load_net_config(
                  R"({"slopes": ["surd:-1,1,5,2"], "window": {"parts": [{"m": 2, "gamma": "??"}]}})");
          }) == Errc::parse_error);
}

TEST_CASE("point and box dimension preconditions") {
    NetConfig cfg = mixed_net_k3("0");
    CHECK(errc_of([&] { net_contains(cfg, {1}); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { generate_net(cfg, Box{{{0, 10}}}); }) == Errc::precondition_unmet);
    CHECK(errc_of([&] { generate_net(cfg, Box{{{0, 10}, {5, 4}}}); }) == Errc::precondition_unmet);
}
