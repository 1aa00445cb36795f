#include "cpn/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpn/cps_net.hpp"
#include "cpn/gap_blocks.hpp"
#include "cpn/ostrowski.hpp"

namespace cpn {

namespace {

using ojson = nlohmann::ordered_json;

// Decimal digits that faithfully render `bits` of binary precision.
unsigned render_digits(unsigned bits) {
    const double d = std::ceil(static_cast<double>(bits) * 0.30102999566398120);
    return std::max(6u, static_cast<unsigned>(d));
}

ojson real_json(const Real& x, unsigned digits) {
    return ojson{{"value", x.decimal(digits)}, {"precision", x.precision_context()}};
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::int64_t parse_i64(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(Errc::parse_error, std::string("bad integer for ") + what + ": '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// "2..8" or "1,3,5" -> list of levels.
std::vector<long> parse_levels(const std::string& s) {
    std::vector<long> out;
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const long lo = parse_i64(s.substr(0, dots), "--levels");
        const long hi = parse_i64(s.substr(dots + 2), "--levels");
        if (lo < 1 || hi < lo) fail(Errc::parse_error, "bad level range: '" + s + "'");
        for (long m = lo; m <= hi; ++m) out.push_back(m);
        return out;
    }
    for (const std::string& part : split(s, ','))
        out.push_back(static_cast<long>(parse_i64(part, "--levels")));
    if (out.empty()) fail(Errc::parse_error, "empty level list");
    return out;
}

std::vector<Gamma> parse_gammas(const std::string& s) {
    std::vector<Gamma> out;
    for (const std::string& part : split(s, ',')) out.push_back(Gamma::parse(part));
    return out;
}

// "lo:hi,lo:hi,..." -> Box.
Box parse_box(const std::string& s) {
    if (s.empty()) fail(Errc::parse_error, "missing --box");
    Box box;
    for (const std::string& part : split(s, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            fail(Errc::parse_error, "box range needs lo:hi, got '" + part + "'");
        box.range.push_back({parse_i64(part.substr(0, colon), "--box"),
                             parse_i64(part.substr(colon + 1), "--box")});
    }
    return box;
}

TablePtr table_for(const RunSpec& spec) {
    if (spec.alpha.empty()) fail(Errc::parse_error, "missing --alpha");
    const Irrational irr = Irrational::parse(spec.alpha);
    return ConvergentTable::build(irr, ConvergentTable::available_depth(irr, spec.depth));
}

NetConfig config_for(const RunSpec& spec) {
    if (spec.config.empty()) fail(Errc::parse_error, "missing --config");
    std::ifstream in(spec.config);
    if (!in) fail(Errc::parse_error, "cannot read net config file '" + spec.config + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return load_net_config(text.str());
}

bool verify_on(VerifyMode mode, bool automatic_value) {
    if (mode == VerifyMode::on) return true;
    if (mode == VerifyMode::off) return false;
    return automatic_value;
}

void emit(const ojson& doc, std::ostream& out) { out << doc.dump(2) << "\n"; }

// ---------------------------------------------------------------- cf

void run_cf(const RunSpec& spec, std::ostream& out) {
    TablePtr t = table_for(spec);
    const unsigned digits = render_digits(spec.precision);
    if (spec.format == "csv") {
        out << "k,a,p,q,D\n";
        out << "0,,0,1," << t->remainder(0).decimal(digits) << "\n";
        for (long k = 1; k <= t->depth(); ++k)
            out << k << "," << t->digit(k) << "," << t->p(k) << "," << t->q(k) << ","
                << t->remainder(k).decimal(digits) << "\n";
        return;
    }
    ojson rows = ojson::array();
    rows.push_back({{"k", 0},
                    {"a", nullptr},
                    {"p", "0"},
                    {"q", "1"},
                    {"D", real_json(t->remainder(0), digits)}});
    for (long k = 1; k <= t->depth(); ++k)
        rows.push_back({{"k", k},
                        {"a", t->digit(k).str()},
                        {"p", t->p(k).str()},
                        {"q", t->q(k).str()},
                        {"D", real_json(t->remainder(k), digits)}});
    emit(ojson{{"schema", "cpn/cf/v1"},
               {"alpha", spec.alpha},
               {"depth", t->depth()},
               {"alpha_value", real_json(t->alpha_value(), digits)},
               {"rows", rows}},
         out);
}

// ---------------------------------------------------------------- ostrowski

std::vector<BigInt> strip_trailing_zeros(std::vector<BigInt> v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

void run_ostrowski(const RunSpec& spec, std::ostream& out) {
    TablePtr t = table_for(spec);
    const unsigned digits = render_digits(spec.precision);
    if (spec.action == "encode" || spec.action == "decode") {
        OstrowskiInt enc{t, {}};
        BigInt n;
        if (spec.action == "encode") {
            try {
                n = BigInt(spec.value);
            } catch (const std::exception&) {
                fail(Errc::parse_error, "bad integer '" + spec.value + "'");
            }
            enc = encode_int(n, t);
            if (decode_int(enc) != n)
                fail(Errc::invariant_violation, "encode/decode round trip failed");
        } else {
            for (const std::string& part : split(spec.value, ','))
                enc.c.push_back(BigInt(parse_i64(part, "digit")));
            n = decode_int(enc);  // validates admissibility
            if (strip_trailing_zeros(encode_int(n, t).c) != strip_trailing_zeros(enc.c))
                fail(Errc::invariant_violation, "digit string is not the canonical encoding");
        }
        if (spec.format == "csv") {
            out << "k,c,q\n";
            for (std::size_t k = 0; k < enc.c.size(); ++k)
                out << (k + 1) << "," << enc.c[k] << "," << t->q(static_cast<long>(k)) << "\n";
            return;
        }
        ojson cs = ojson::array();
        for (std::size_t k = 0; k < enc.c.size(); ++k)
            cs.push_back({{"k", k + 1},
                          {"c", enc.c[k].str()},
                          {"q", t->q(static_cast<long>(k)).str()}});
        emit(ojson{{"schema", "cpn/ostrowski/v1"},
                   {"alpha", spec.alpha},
                   {"action", spec.action},
                   {"n", n.str()},
                   {"digit_count", enc.c.size()},
                   {"digits", cs},
                   {"verified", true}},
             out);
        return;
    }
    // action == "real": window expansion of a real value
    const Real beta = parse_real_spec(spec.value);
    const long count = spec.N > 0 ? static_cast<long>(spec.N) : 20;
    const OstrowskiReal enc = encode_real(beta, t, count);
    const Real partial = decode_real(enc);
    const Real bound = real_tail_bound(enc);
    const Real residual = enc.window_value - partial;
    std::string within = "true";
    try {
        if (bound.less_than(residual.abs())) fail(Errc::invariant_violation, "expansion residual exceeds the tail bound");
    } catch (const Error& e) {
        if (e.code() == Errc::invariant_violation) throw;
        within = std::string("undecided: ") + e.what();
    }
    if (spec.format == "csv") {
        out << "k,b\n";
        for (std::size_t k = 0; k < enc.b.size(); ++k) out << (k + 1) << "," << enc.b[k] << "\n";
        return;
    }
    ojson bs = ojson::array();
    for (const BigInt& b : enc.b) bs.push_back(b.str());
    emit(ojson{{"schema", "cpn/ostrowski-real/v1"},
               {"alpha", spec.alpha},
               {"beta", spec.value},
               {"digit_count", enc.b.size()},
               {"digits", bs},
               {"window_shift", enc.window_shift.str()},
               {"window_value", real_json(enc.window_value, digits)},
               {"partial_sum", real_json(partial, digits)},
               {"residual", real_json(residual, digits)},
               {"tail_bound", real_json(bound, digits)},
               {"residual_within_bound", within}},
         out);
}

// ---------------------------------------------------------------- gaps

void run_gaps(const RunSpec& spec, std::ostream& out) {
    TablePtr t = table_for(spec);
    const std::int64_t limit = spec.N > 0 ? spec.N : 100;
    AmEnumerator en(t, spec.m);
    struct Row {
        std::int64_t index, n, gap;
        char symbol;
    };
    std::vector<Row> rows;
    while (en.current() <= limit) {
        rows.push_back({en.index(), en.current(), en.peek_gap(), en.peek_symbol()});
        en.step();
    }
    if (spec.format == "csv") {
        out << "index,n,gap,symbol\n";
        for (const Row& r : rows)
            out << r.index << "," << r.n << "," << r.gap << "," << r.symbol << "\n";
        return;
    }
    ojson members = ojson::array();
    for (const Row& r : rows)
        members.push_back({{"index", r.index},
                           {"n", r.n},
                           {"gap", r.gap},
                           {"symbol", std::string(1, r.symbol)}});
    ojson doc{{"schema", "cpn/gaps/v1"},
              {"alpha", spec.alpha},
              {"m", spec.m},
              {"limit", limit},
              {"members", members}};
    if (spec.block_i >= -1) {
        const std::string word = block(t, spec.m, spec.block_i);
        const BlockStats stats = block_stats(t, spec.m, spec.block_i);
        doc["block"] = ojson{{"i", spec.block_i},
                             {"word", word},
                             {"ones", stats.ones.str()},
                             {"twos", stats.twos.str()},
                             {"length", stats.length.str()},
                             {"combined", stats.combined.str()}};
    }
    emit(doc, out);
}

// ---------------------------------------------------------------- interval

void run_interval(const RunSpec& spec, std::ostream& out) {
    TablePtr t = table_for(spec);
    const unsigned digits = render_digits(spec.precision);
    if (spec.action == "partition") {
        const auto pieces = level_partition(t, spec.m);
        if (spec.format == "csv") {
            out << "piece,digit,left,right,length\n";
            for (std::size_t i = 0; i < pieces.size(); ++i)
                out << i << "," << pieces[i].digit << "," << pieces[i].left.decimal(digits) << ","
                    << pieces[i].right.decimal(digits) << "," << pieces[i].length.decimal(digits)
                    << "\n";
            return;
        }
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < pieces.size(); ++i)
            rows.push_back({{"piece", i},
                            {"digit", pieces[i].digit},
                            {"left", real_json(pieces[i].left, digits)},
                            {"right", real_json(pieces[i].right, digits)},
                            {"length", real_json(pieces[i].length, digits)}});
        emit(ojson{{"schema", "cpn/interval-partition/v1"},
                   {"alpha", spec.alpha},
                   {"m", spec.m},
                   {"pieces", rows}},
             out);
        return;
    }

    const SpecialInterval J = make_interval(t, spec.m, Gamma::parse(spec.gamma));
    if (spec.action == "info") {
        // Cross-derive the length through the tail quantities when possible.
        std::string routes = "true";
        try {
            if ((J.length() - J.length_by_tails()).sign() != 0)
                fail(Errc::invariant_violation, "the two length derivations disagree");
        } catch (const Error& e) {
            if (e.code() == Errc::invariant_violation) throw;
            routes = std::string("unavailable: ") + e.what();
        }
        if (spec.format == "csv") {
            out << "m,gamma,left,right,length,full_circle\n";
            out << spec.m << "," << J.gamma().to_string() << "," << J.left().decimal(digits) << ","
                << J.right().decimal(digits) << "," << J.length().decimal(digits) << ","
                << (J.full_circle() ? 1 : 0) << "\n";
            return;
        }
        emit(ojson{{"schema", "cpn/interval-info/v1"},
                   {"alpha", spec.alpha},
                   {"m", spec.m},
                   {"gamma", J.gamma().to_string()},
                   {"left", real_json(J.left(), digits)},
                   {"right", real_json(J.right(), digits)},
                   {"length", real_json(J.length(), digits)},
                   {"full_circle", J.full_circle()},
                   {"length_routes_agree", routes}},
             out);
        return;
    }

    // action == "count"
    const std::int64_t N = spec.N > 0 ? spec.N : 10000;
    const std::int64_t count = count_hits(J, N);  // self-checks a brute prefix internally
    const bool verified = verify_on(spec.verify, N <= 10000);
    if (verified && N > 10000) {
        const std::int64_t brute = brute_count_hits(J, N);
        if (brute != count)
            fail(Errc::invariant_violation, "fast hit count disagrees with the brute oracle");
    }
    const Real expected = Real(BigInt(N)) * J.length();
    const Real residual = Real(BigInt(count)) - expected;
    if (spec.format == "csv") {
        out << "m,gamma,N,count,expected,residual\n";
        out << spec.m << "," << J.gamma().to_string() << "," << N << "," << count << ","
            << expected.decimal(digits) << "," << residual.decimal(digits) << "\n";
        return;
    }
    emit(ojson{{"schema", "cpn/interval-count/v1"},
               {"alpha", spec.alpha},
               {"m", spec.m},
               {"gamma", J.gamma().to_string()},
               {"N", N},
               {"count", count},
               {"expected", real_json(expected, digits)},
               {"residual", real_json(residual, digits)},
               {"verified", verified}},
         out);
}

// ---------------------------------------------------------------- scan

void run_scan(const RunSpec& spec, std::ostream& out) {
    TablePtr t = table_for(spec);
    const std::vector<long> levels = parse_levels(spec.levels.empty() ? "1..6" : spec.levels);
    if (spec.action == "discrepancy") {
        const std::int64_t N_max = spec.N > 0 ? spec.N : 100000;
        const DiscrepancyReport rep =
            discrepancy_scan(t, levels, parse_gammas(spec.gammas), N_max);
        ojson summary{{"schema", "cpn/scan-discrepancy/v1"},
                      {"alpha", spec.alpha},
                      {"N_max", rep.N_max},
                      {"gammas", rep.gamma_desc},
                      {"max_abs", rep.max_abs},
                      {"growth", rep.growth},
                      {"growth_tolerance", DiscrepancyReport::growth_tolerance},
                      {"decile_max", rep.decile_max}};
        if (spec.format == "csv") {
            out << "m,gamma,count_at_N_max,argmax_N,count_at_argmax,max_abs\n";
            for (const DiscrepancyCell& c : rep.cells)
                out << c.m << "," << c.gamma << "," << c.count_at_N_max << "," << c.argmax_N
                    << "," << c.count_at_argmax << "," << fmt_double(c.max_abs) << "\n";
            out << "# summary " << summary.dump() << "\n";
            return;
        }
        ojson cells = ojson::array();
        for (const DiscrepancyCell& c : rep.cells)
            cells.push_back({{"m", c.m},
                             {"gamma", c.gamma},
                             {"count_at_N_max", c.count_at_N_max},
                             {"argmax_N", c.argmax_N},
                             {"count_at_argmax", c.count_at_argmax},
                             {"max_abs", c.max_abs},
                             {"decile_max", c.decile_max}});
        summary["cells"] = cells;
        emit(summary, out);
        return;
    }

    // action == "residual": per-level counting-residual scans
    const std::int64_t M_max = spec.N > 0 ? spec.N : 100000;
    const std::int64_t every = spec.every > 0 ? spec.every : std::max<std::int64_t>(1, M_max / 10);
    if (spec.format == "csv") out << "m,M,n_M,residual,prefix_max_abs\n";
    ojson per_level = ojson::array();
    double overall = 0.0;
    for (long m : levels) {
        const ResidualScan scan = scan_residual(t, m, M_max, every);
        overall = std::max(overall, scan.max_abs);
        if (spec.format == "csv") {
            for (const ResidualRow& r : scan.rows)
                out << m << "," << r.M << "," << r.n_M << "," << fmt_double(r.residual) << ","
                    << fmt_double(r.prefix_max_abs) << "\n";
            continue;
        }
        ojson rows = ojson::array();
        for (const ResidualRow& r : scan.rows)
            rows.push_back({{"M", r.M},
                            {"n_M", r.n_M},
                            {"residual", r.residual},
                            {"prefix_max_abs", r.prefix_max_abs}});
        per_level.push_back(
            {{"m", m}, {"density", scan.density}, {"max_abs", scan.max_abs}, {"rows", rows}});
    }
    if (spec.format == "csv") {
        out << "# summary " << ojson{{"max_abs", overall}}.dump() << "\n";
        return;
    }
    emit(ojson{{"schema", "cpn/scan-residual/v1"},
               {"alpha", spec.alpha},
               {"M_max", M_max},
               {"max_abs", overall},
               {"levels", per_level}},
         out);
}

// ---------------------------------------------------------------- net

void run_net(const RunSpec& spec, std::ostream& out) {
    const NetConfig cfg = config_for(spec);
    if (spec.action == "generate") {
        const Box box = parse_box(spec.box);
        const auto pts = generate_net(cfg, box);
        __int128 volume = 1;
        for (const auto& r : box.range) {
            if (r.first > r.second) fail(Errc::precondition_unmet, "box range is empty");
            volume *= static_cast<__int128>(r.second - r.first + 1);
            if (volume > 1000000000) volume = 1000000000;
        }
        const bool verified = verify_on(spec.verify, volume <= 10000);
        if (verified) {
            if (volume > 1000000)
                fail(Errc::precondition_unmet, "the brute-force oracle is capped at 1e6 points");
            std::vector<NetPoint> brute;
            std::vector<std::int64_t> tuple(box.range.size());
            const std::size_t dims = box.range.size();
            for (std::size_t i = 0; i < dims; ++i) tuple[i] = box.range[i].first;
            while (true) {
                if (net_contains(cfg, tuple)) brute.push_back(tuple);
                std::size_t i = dims;
                bool advanced = false;
                while (i > 0) {
                    --i;
                    if (tuple[i] < box.range[i].second) {
                        ++tuple[i];
                        advanced = true;
                        break;
                    }
                    tuple[i] = box.range[i].first;
                }
                if (!advanced) break;
            }
            if (brute != pts)
                fail(Errc::invariant_violation, "generated net disagrees with the membership oracle");
        }
        if (spec.format == "csv") {
            for (long i = 1; i <= cfg.k - 1; ++i) out << (i > 1 ? "," : "") << "n" << i;
            out << "\n";
            for (const NetPoint& p : pts) {
                for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
                out << "\n";
            }
            return;
        }
        emit(ojson{{"schema", "cpn/net-points/v1"},
                   {"config", spec.config},
                   {"k", cfg.k},
                   {"box", spec.box},
                   {"count", pts.size()},
                   {"verified", verified},
                   {"points", pts}},
             out);
        return;
    }
    if (spec.action == "bd-verify") {
        const BDReport rep = bd_map(cfg, parse_box(spec.box));
        if (spec.format == "csv") {
            out << "index,displacement\n";
            for (std::size_t i = 0; i < rep.displacements.size(); ++i)
                out << i << "," << fmt_double(rep.displacements[i]) << "\n";
            out << "# summary "
                << ojson{{"points", rep.points},
                         {"sup_displacement", rep.sup_displacement},
                         {"ratio", rep.ratio},
                         {"injective", rep.injective}}
                       .dump()
                << "\n";
            return;
        }
        emit(ojson{{"schema", "cpn/net-bd/v1"},
                   {"config", spec.config},
                   {"box", rep.box_desc},
                   {"target_lattice", rep.target_lattice},
                   {"points", rep.points},
                   {"sup_displacement", rep.sup_displacement},
                   {"ratio", rep.ratio},
                   {"injective", rep.injective}},
             out);
        return;
    }
    if (spec.action == "density") {
        const double lambda =
            spec.lambda > 0 ? spec.lambda : cfg.window.total_length().to_double();
        const DensityDefect dd = density_defect(cfg, spec.rho, lambda, spec.samples, spec.seed);
        if (spec.format == "csv") {
            out << "sample";
            for (long i = 1; i <= cfg.k - 1; ++i) out << ",offset" << i;
            out << ",count,defect\n";
            for (std::size_t s = 0; s < dd.boxes.size(); ++s) {
                out << s;
                for (std::int64_t o : dd.boxes[s].offset) out << "," << o;
                out << "," << dd.boxes[s].count << "," << fmt_double(dd.boxes[s].defect) << "\n";
            }
            out << "# summary " << ojson{{"rho", dd.rho}, {"max_defect", dd.max_defect}}.dump()
                << "\n";
            return;
        }
        ojson boxes = ojson::array();
        for (const SampledBox& b : dd.boxes)
            boxes.push_back({{"offset", b.offset}, {"count", b.count}, {"defect", b.defect}});
        emit(ojson{{"schema", "cpn/net-density/v1"},
                   {"config", spec.config},
                   {"rho", dd.rho},
                   {"lambda", dd.lambda},
                   {"samples", spec.samples},
                   {"seed", spec.seed},
                   {"max_defect", dd.max_defect},
                   {"boxes", boxes}},
             out);
        return;
    }
    // action == "bk-sum"
    const BKSums bk = bk_partial_sums(cfg, spec.T, spec.samples, spec.seed);
    if (spec.format == "csv") {
        out << "t,rho,defect,partial_sum\n";
        for (std::size_t i = 0; i < bk.defects.size(); ++i)
            out << (i + 1) << "," << (std::int64_t(1) << (i + 1)) << ","
                << fmt_double(bk.defects[i]) << "," << fmt_double(bk.partial_sums[i]) << "\n";
        return;
    }
    emit(ojson{{"schema", "cpn/net-bk/v1"},
               {"config", spec.config},
               {"T", spec.T},
               {"samples", spec.samples},
               {"seed", spec.seed},
               {"defects", bk.defects},
               {"partial_sums", bk.partial_sums}},
         out);
}

}  // namespace

int exit_status(Errc code) {
    switch (code) {
        case Errc::parse_error:
        case Errc::invalid_digits:
        case Errc::not_irrational:
        case Errc::not_in_unit_interval:
            return 2;
        case Errc::invariant_violation:
            return 4;
        default:
            return 3;
    }
}

void run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    if (spec.format != "json" && spec.format != "csv")
        fail(Errc::parse_error, "--format must be json or csv");
    if (spec.workers < 1) fail(Errc::parse_error, "--workers must be >= 1");

    std::ofstream file;
    std::ostream* sink = &out;
    if (!spec.out.empty()) {
        file.open(spec.out);
        if (!file) fail(Errc::io_error, "cannot open output file '" + spec.out + "'");
        sink = &file;
    }

    if (spec.subcommand == "cf")
        run_cf(spec, *sink);
    else if (spec.subcommand == "ostrowski")
        run_ostrowski(spec, *sink);
    else if (spec.subcommand == "gaps")
        run_gaps(spec, *sink);
    else if (spec.subcommand == "interval")
        run_interval(spec, *sink);
    else if (spec.subcommand == "scan")
        run_scan(spec, *sink);
    else if (spec.subcommand == "net")
        run_net(spec, *sink);
    else
        fail(Errc::parse_error, "unknown subcommand '" + spec.subcommand + "'");

    if (sink == &file) {
        file.flush();
        if (!file) fail(Errc::io_error, "failed writing output file '" + spec.out + "'");
    }
    (void)err;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunSpec spec;
    CLI::App app{"Continued fractions, Ostrowski numeration, three-distance gaps,\n"
                 "bounded-remainder intervals, and cut-and-project nets."};
    app.require_subcommand(1);
    app.add_option("--alpha", spec.alpha, "alpha spec (surd:..., dec:..., cf:..., cf-periodic:...)");
    app.add_option("--precision", spec.precision, "rendered precision in bits (default 64)");
    app.add_option("--out", spec.out, "write the artifact to this file instead of stdout");
    app.add_option("--format", spec.format, "output format: json or csv (default json)");
    app.add_option("--seed", spec.seed, "RNG seed for sampled reports (default 12345)");
    app.add_option("--workers", spec.workers, "worker count (execution order is fixed)");
    app.add_flag_callback("--verify", [&spec] { spec.verify = VerifyMode::on; },
                          "force the brute-force oracle on");
    app.add_flag_callback("--no-verify", [&spec] { spec.verify = VerifyMode::off; },
                          "disable the brute-force oracle (default: on for N <= 1e4)");

    auto leaf = [&spec](CLI::App* cmd, const char* sub, const char* action) {
        cmd->fallthrough();
        cmd->callback([&spec, sub, action] {
            spec.subcommand = sub;
            spec.action = action;
        });
        return cmd;
    };

    CLI::App* cf = leaf(app.add_subcommand("cf", "convergent table of alpha"), "cf", "");
    cf->add_option("--depth", spec.depth, "table depth (default 40, clamped to certifiable)");

    CLI::App* ost = app.add_subcommand("ostrowski", "integer and real numeration");
    ost->fallthrough();
    ost->require_subcommand(1);
    leaf(ost->add_subcommand("encode", "digits of a non-negative integer"), "ostrowski", "encode")
        ->add_option("n", spec.value, "integer to encode")
        ->required();
    leaf(ost->add_subcommand("decode", "value of a digit string"), "ostrowski", "decode")
        ->add_option("digits", spec.value, "comma-separated digits c_1,c_2,...")
        ->required();
    CLI::App* real = leaf(ost->add_subcommand("real", "window expansion of a real"), "ostrowski",
                          "real");
    real->add_option("beta", spec.value, "real spec to expand")->required();
    real->add_option("--digits", spec.N, "number of expansion digits (default 20)");
    ost->add_option("--depth", spec.depth, "table depth");

    CLI::App* gaps = leaf(app.add_subcommand("gaps", "two-gap structure of the level-m hit set"),
                          "gaps", "");
    gaps->add_option("--m,-m", spec.m, "level (default 2)");
    gaps->add_option("--limit", spec.N, "list members up to this value (default 100)");
    gaps->add_option("--block", spec.block_i, "include the block word and counts for this index");
    gaps->add_option("--depth", spec.depth, "table depth");

    CLI::App* interval = app.add_subcommand("interval", "special intervals J(m, gamma)");
    interval->fallthrough();
    interval->require_subcommand(1);
    CLI::App* info = leaf(interval->add_subcommand("info", "endpoints and length"), "interval",
                          "info");
    CLI::App* part = leaf(interval->add_subcommand("partition", "level pieces tiling the parent"),
                          "interval", "partition");
    CLI::App* cnt = leaf(interval->add_subcommand("count", "hits of the orbit in the window"),
                         "interval", "count");
    for (CLI::App* cmd : {info, part, cnt}) {
        cmd->add_option("--m,-m", spec.m, "level (default 2)");
        cmd->add_option("--depth", spec.depth, "table depth");
    }
    info->add_option("--gamma", spec.gamma, "translate (default 0)");
    cnt->add_option("--gamma", spec.gamma, "translate (default 0)");
    cnt->add_option("--N", spec.N, "orbit prefix length (default 10000)");

    CLI::App* scan = app.add_subcommand("scan", "discrepancy and residual scans");
    scan->fallthrough();
    scan->require_subcommand(1);
    CLI::App* disc = leaf(scan->add_subcommand("discrepancy", "hit-count deviations on a level grid"),
                          "scan", "discrepancy");
    disc->add_option("--levels", spec.levels, "levels, e.g. 1..8 or 2,4,6 (default 1..6)");
    disc->add_option("--gammas", spec.gammas, "comma-separated translates (default 0)");
    disc->add_option("--max-N", spec.N, "orbit prefix bound (default 100000)");
    CLI::App* resid = leaf(scan->add_subcommand("residual", "counting residual along the hit walk"),
                           "scan", "residual");
    resid->add_option("--levels", spec.levels, "levels (default 1..6)");
    resid->add_option("--max-M", spec.N, "hit count bound (default 100000)");
    resid->add_option("--every", spec.every, "snapshot stride (default max-M/10)");
    scan->add_option("--depth", spec.depth, "table depth");

    CLI::App* net = app.add_subcommand("net", "cut-and-project nets");
    net->fallthrough();
    net->require_subcommand(1);
    net->add_option("--config", spec.config, "net config JSON file");
    CLI::App* gen = leaf(net->add_subcommand("generate", "points in a box"), "net", "generate");
    gen->add_option("--box", spec.box, "ranges lo:hi,lo:hi,...");
    CLI::App* bd = leaf(net->add_subcommand("bd-verify", "displacement map onto the rescaled lattice"),
                        "net", "bd-verify");
    bd->add_option("--box", spec.box, "ranges lo:hi,lo:hi,...");
    CLI::App* dens = leaf(net->add_subcommand("density", "sampled density defect"), "net",
                          "density");
    dens->add_option("--rho", spec.rho, "box side (default 1024)");
    dens->add_option("--lambda", spec.lambda, "claimed density (default: window measure)");
    dens->add_option("--samples", spec.samples, "sample boxes (default 3)");
    CLI::App* bk = leaf(net->add_subcommand("bk-sum", "partial sums of dyadic density defects"),
                        "net", "bk-sum");
    bk->add_option("-T,--T", spec.T, "dyadic horizon (default 12)");
    bk->add_option("--samples", spec.samples, "sample boxes per side (default 3)");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("cpn");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        run(spec, out, err);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_status(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cpn
