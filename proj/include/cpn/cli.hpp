#pragma once

/**
 * Command-line surface tying the modules together.
 *
 * A run is fully determined by its RunSpec: same spec, byte-identical
 * output (fixed default seed, fixed merge order, no timestamps). JSON
 * reports are schema-versioned and every real-valued field carries its
 * precision context ("exact" or "bits:N"); CSV output is plot-ready.
 *
 * Exit statuses: 0 success, 2 parse error (malformed arguments, specs, or
 * referenced input files), 3 computation error (depth/precision/domain), 4
 * invariant violation (a self-check caught a fast-path/oracle mismatch).
 *
 * The self-verifying mode runs the brute-force oracle alongside the fast
 * path and fails loudly on mismatch; `automatic` enables it whenever the
 * relevant count is at most 10^4.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cpn/errors.hpp"

namespace cpn {

enum class VerifyMode { automatic, on, off };

struct RunSpec {
    std::string subcommand;  // cf | ostrowski | gaps | interval | scan | net
    std::string action;      // per-subcommand verb (encode, info, generate, ...)
    std::string alpha;       // alpha spec string
    std::string value;       // positional payload (integer to encode, digit list, beta spec)
    std::string gamma = "0"; // interval translate
    std::string levels;      // scan levels: "lo..hi" or comma list
    std::string gammas = "0";// scan translates, comma-separated
    std::string config;      // net config file path
    std::string box;         // box ranges "lo:hi,lo:hi,..."
    long m = 2;              // interval / gap level
    long depth = 40;         // table depth request (clamped to the certifiable depth)
    long block_i = -2;       // block index for `gaps`; >= -1 to include one, -2 = none
    std::int64_t N = 0;      // count bound / digit count / max-N / max-M
    std::int64_t every = 0;  // residual snapshot stride (0 = N/10)
    long K = 8;              // dyadic box exponent
    std::int64_t rho = 1024; // density box side
    double lambda = 0.0;     // claimed density (0 = window measure)
    int samples = 3;
    int T = 12;              // dyadic partial-sum horizon
    std::string format = "json";  // json | csv
    unsigned precision = 64;      // bits; rendered decimals get ceil(bits*log10 2) digits
    std::uint64_t seed = 12345;   // fixed default keeps runs reproducible
    int workers = 1;              // accepted for interface stability; execution order is fixed
    VerifyMode verify = VerifyMode::automatic;
    std::string out;              // output file; empty = standard output
};

// Executes a run, writing the artifact to `out` (or spec.out when set) and
// diagnostics to `err`. Throws Error on failure; see cli_main for the
// exit-status mapping.
void run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// Maps an error code to the process exit status (2 / 3 / 4 as above).
int exit_status(Errc code);

// Parses argv-style arguments (program name excluded), runs the spec, and
// renders errors; returns the exit status.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpn
