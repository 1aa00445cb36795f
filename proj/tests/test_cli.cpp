#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpn/cli.hpp"

using namespace cpn;

namespace {

struct CliResult {
    int status;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = cli_main(args, out, err);
    return {status, out.str(), err.str()};
}

nlohmann::json as_json(const std::string& text) { return nlohmann::json::parse(text); }

// Writes a one-part golden-window net config and returns its path.
std::string write_net_config() {
    const std::string path = "test_cli_net_config.json";
    std::ofstream f(path);
    f << R"({"slopes": ["surd:-1,1,5,2"], "shift": "0",
             "window": {"multiplicity_bound": 1, "parts": [{"m": 2, "gamma": "0"}]}})";
    return path;
}

}  // namespace

TEST_CASE("interval info renders the window at the requested precision") {
    CliResult r = cli({"interval", "info", "--alpha", "surd:-1,1,5,2", "--m", "2", "--gamma", "0"});
    REQUIRE(r.status == 0);
    auto doc = as_json(r.out);
    CHECK(doc["schema"] == "cpn/interval-info/v1");
    CHECK(doc["length"]["value"].get<std::string>().substr(0, 8) == "0.618033");
    CHECK(doc["length"]["precision"] == "exact");
    CHECK(doc["full_circle"] == false);
    CHECK(doc["length_routes_agree"] == "true");

    // higher precision renders more digits
    CliResult wide = cli({"interval", "info", "--alpha", "surd:-1,1,5,2", "--precision", "160"});
    const std::string v = as_json(wide.out)["length"]["value"];
    CHECK(v.size() > doc["length"]["value"].get<std::string>().size());
}

TEST_CASE("malformed alpha spec exits 2 with a diagnostic on standard error") {
    CliResult r = cli({"cf", "--alpha", "nonsense"});
    CHECK(r.status == 2);
    CHECK(r.out.empty());
    CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("argument errors and help") {
    CHECK(cli({"no-such-command"}).status == 2);
    CHECK(cli({"interval", "info", "--bogus-flag", "1"}).status == 2);
    CHECK(cli({}).status == 2);  // a subcommand is required
    CliResult help = cli({"--help"});
    CHECK(help.status == 0);
    CHECK(help.out.find("cf") != std::string::npos);
    CHECK(help.out.find("net") != std::string::npos);
}

TEST_CASE("exit status mapping covers the three failure classes") {
    CHECK(exit_status(Errc::parse_error) == 2);
    CHECK(exit_status(Errc::invalid_digits) == 2);
    CHECK(exit_status(Errc::not_irrational) == 2);
    CHECK(exit_status(Errc::depth_insufficient) == 3);
    CHECK(exit_status(Errc::horizon_exceeded) == 3);
    CHECK(exit_status(Errc::undecidable_at_horizon) == 3);
    CHECK(exit_status(Errc::io_error) == 3);
    CHECK(exit_status(Errc::invariant_violation) == 4);
}

TEST_CASE("cf table emits rows in both formats") {
    CliResult r = cli({"cf", "--alpha", "surd:-1,1,2,1", "--depth", "6"});
    REQUIRE(r.status == 0);
    auto doc = as_json(r.out);
    CHECK(doc["schema"] == "cpn/cf/v1");
    CHECK(doc["depth"] == 6);
    CHECK(doc["rows"].size() == 7);  // k = 0..6
    CHECK(doc["rows"][2]["q"] == "5");
    CHECK(doc["rows"][6]["q"] == "169");
    CHECK(doc["alpha_value"]["precision"] == "exact");

    CliResult csv = cli({"cf", "--alpha", "surd:-1,1,2,1", "--depth", "6", "--format", "csv"});
    REQUIRE(csv.status == 0);
    CHECK(csv.out.substr(0, 10) == "k,a,p,q,D\n");
    CHECK(csv.out.find("6,2,70,169,") != std::string::npos);
}

TEST_CASE("ostrowski encode, decode, and failure statuses") {
    CliResult enc = cli({"ostrowski", "encode", "--alpha", "surd:-1,1,2,1", "100"});
    REQUIRE(enc.status == 0);
    auto doc = as_json(enc.out);
    CHECK(doc["n"] == "100");
    CHECK(doc["verified"] == true);
    CHECK(doc["digits"].size() == 6);

    CliResult dec = cli({"ostrowski", "decode", "--alpha", "surd:-1,1,2,1", "0,1,0,2"});
    REQUIRE(dec.status == 0);
    CHECK(as_json(dec.out)["n"] == "26");

    // inadmissible digit string: c_1 exceeds a_1 - 1
    CHECK(cli({"ostrowski", "decode", "--alpha", "surd:-1,1,2,1", "2"}).status == 2);
    // table too shallow to encode: computation error
    CHECK(cli({"ostrowski", "encode", "--alpha", "surd:-1,1,5,2", "--depth", "5", "100"}).status ==
          3);
    // bad payload
    CHECK(cli({"ostrowski", "encode", "--alpha", "surd:-1,1,2,1", "12x"}).status == 2);
}

TEST_CASE("ostrowski real expansion reports the tail bound") {
    CliResult r = cli({"ostrowski", "real", "--alpha", "surd:-1,1,5,2", "1/3", "--digits", "8"});
    REQUIRE(r.status == 0);
    auto doc = as_json(r.out);
    CHECK(doc["digit_count"] == 8);
    CHECK(doc["residual_within_bound"] == "true");
    CHECK(doc["window_value"]["precision"] == "exact");
}

TEST_CASE("gaps listing with a block word") {
    CliResult r = cli({"gaps", "--alpha", "surd:-1,1,5,2", "--m", "2", "--limit", "13", "--block",
                       "2"});
    REQUIRE(r.status == 0);
    auto doc = as_json(r.out);
    REQUIRE(doc["members"].size() == 9);
    CHECK(doc["members"][0]["n"] == 0);
    CHECK(doc["members"][8]["n"] == 13);
    CHECK(doc["block"]["word"] == "121");
    CHECK(doc["block"]["combined"] == "5");

    CliResult csv = cli({"gaps", "--alpha", "surd:-1,1,5,2", "--m", "2", "--limit", "13",
                         "--format", "csv"});
    CHECK(csv.out.substr(0, 18) == "index,n,gap,symbol");
}

TEST_CASE("interval partition and count subcommands") {
    CliResult part = cli({"interval", "partition", "--alpha", "surd:-1,1,5,2", "--m", "3"});
    REQUIRE(part.status == 0);
    CHECK(as_json(part.out)["pieces"].size() >= 1);

    CliResult count =
        cli({"interval", "count", "--alpha", "surd:-1,1,5,2", "--m", "2", "--N", "2000"});
    REQUIRE(count.status == 0);
    auto doc = as_json(count.out);
    CHECK(doc["count"].get<std::int64_t>() == 1236);  // 2000 x 0.618034 rounds down, frozen
    CHECK(doc["verified"] == true);

    // --no-verify still runs the internal prefix self-check, just not the full oracle
    CliResult off = cli({"interval", "count", "--alpha", "surd:-1,1,5,2", "--m", "2", "--N",
                         "2000", "--no-verify"});
    CHECK(as_json(off.out)["verified"] == false);
    CHECK(as_json(off.out)["count"] == doc["count"]);
}

TEST_CASE("scan discrepancy emits csv rows plus a summary line") {
    CliResult r = cli({"scan", "discrepancy", "--alpha", "surd:-1,1,2,1", "--levels", "1..3",
                       "--max-N", "5000", "--format", "csv"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("m,gamma,count_at_N_max") == 0);
    CHECK(r.out.find("# summary {") != std::string::npos);

    CliResult j = cli({"scan", "discrepancy", "--alpha", "surd:-1,1,2,1", "--levels", "1..3",
                       "--max-N", "5000"});
    auto doc = as_json(j.out);
    CHECK(doc["schema"] == "cpn/scan-discrepancy/v1");
    CHECK(doc["cells"].size() == 3);
    CHECK(doc["decile_max"].size() == 10);
}

TEST_CASE("scan residual reports per-level maxima") {
    CliResult r = cli({"scan", "residual", "--alpha", "surd:-1,1,5,2", "--levels", "2,3", "--max-M",
                       "2000"});
    REQUIRE(r.status == 0);
    auto doc = as_json(r.out);
    CHECK(doc["levels"].size() == 2);
    CHECK(doc["max_abs"].get<double>() > 0.0);
    CHECK(doc["levels"][0]["rows"].size() >= 10);
}

TEST_CASE("net subcommands run from a config file") {
    const std::string cfg = write_net_config();
    CliResult gen = cli({"net", "generate", "--config", cfg, "--box", "0:10"});
    REQUIRE(gen.status == 0);
    auto doc = as_json(gen.out);
    CHECK(doc["count"] == 7);
    CHECK(doc["verified"] == true);  // small box: oracle on by default
    CHECK(doc["points"][0][0] == 0);
    CHECK(doc["points"][6][0] == 10);

    CliResult bd = cli({"net", "bd-verify", "--config", cfg, "--box", "0:300"});
    auto bdoc = as_json(bd.out);
    CHECK(bdoc["injective"] == true);
    CHECK(bdoc["points"] == 186);
    CHECK(bdoc["sup_displacement"].get<double>() < 2.0);

    CliResult dens = cli({"net", "density", "--config", cfg, "--rho", "256", "--samples", "2"});
    CHECK(as_json(dens.out)["max_defect"].get<double>() < 0.05);

    CliResult bk = cli({"net", "bk-sum", "--config", cfg, "-T", "6", "--samples", "2"});
    auto kdoc = as_json(bk.out);
    CHECK(kdoc["defects"].size() == 6);
    CHECK(kdoc["partial_sums"].size() == 6);

    CHECK(cli({"net", "generate", "--config", "no-such-file.json", "--box", "0:5"}).status == 2);
    CHECK(cli({"net", "generate", "--config", cfg, "--box", "5:1"}).status == 3);
    // forcing the oracle past its cap is a computation error, not silence
    CHECK(cli({"net", "generate", "--config", cfg, "--box", "0:2000000", "--verify"}).status == 3);
    std::remove(cfg.c_str());
}

TEST_CASE("bad net config files exit 2") {
    const std::string path = "test_cli_bad_config.json";
    std::ofstream(path) << "{ not json";
    CHECK(cli({"net", "generate", "--config", path, "--box", "0:5"}).status == 2);
    std::ofstream(path) << R"({"slopes": ["1/3"], "window": {"parts": []}})";
    CHECK(cli({"net", "generate", "--config", path, "--box", "0:5"}).status == 3);
    std::remove(path.c_str());
}

TEST_CASE("identical run specs produce byte-identical output") {
    const std::vector<std::string> scan_args{"scan", "discrepancy", "--alpha", "surd:-1,1,2,1",
                                             "--levels", "1..3", "--max-N", "4000"};
    CHECK(cli(scan_args).out == cli(scan_args).out);

    const std::string cfg = write_net_config();
    const std::vector<std::string> dens_args{"net", "density", "--config", cfg,
                                             "--rho", "128", "--samples", "3"};
    CHECK(cli(dens_args).out == cli(dens_args).out);
    // a different seed samples different boxes
    std::vector<std::string> other = dens_args;
    other.push_back("--seed");
    other.push_back("999");
    CHECK(cli(other).out != cli(dens_args).out);
    std::remove(cfg.c_str());
}

TEST_CASE("--out writes the artifact to a file") {
    const std::string path = "test_cli_artifact.json";
    CliResult r = cli({"interval", "info", "--alpha", "surd:-1,1,5,2", "--out", path});
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream body;
    body << f.rdbuf();
    CHECK(as_json(body.str())["schema"] == "cpn/interval-info/v1");
    std::remove(path.c_str());
}

TEST_CASE("format and worker validation") {
    CHECK(cli({"cf", "--alpha", "surd:-1,1,5,2", "--format", "xml"}).status == 2);
    CHECK(cli({"cf", "--alpha", "surd:-1,1,5,2", "--workers", "0"}).status == 2);
    CHECK(cli({"cf", "--alpha", "surd:-1,1,5,2", "--workers", "4"}).status == 0);
}
