#pragma once

#include <stdexcept>
#include <string>

namespace cpn {

// Failure taxonomy shared by every module. Codes map onto process exit
// statuses in the CLI: parse -> 2, computation -> 3, invariant -> 4.
enum class Errc {
    parse_error,
    not_irrational,
    not_in_unit_interval,
    horizon_exceeded,
    depth_insufficient,
    index_out_of_range,
    invalid_digits,
    table_mismatch,
    out_of_window,
    orbit_point,
    precondition_unmet,
    undecidable_at_horizon,
    window_not_special,
    multiplicity_exceeded,
    mixed_field,
    io_error,
    invariant_violation,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::parse_error: return "ParseError";
        case Errc::not_irrational: return "NotIrrational";
        case Errc::not_in_unit_interval: return "NotInUnitInterval";
        case Errc::horizon_exceeded: return "HorizonExceeded";
        case Errc::depth_insufficient: return "DepthInsufficient";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::invalid_digits: return "InvalidDigits";
        case Errc::table_mismatch: return "TableMismatch";
        case Errc::out_of_window: return "OutOfWindow";
        case Errc::orbit_point: return "OrbitPoint";
        case Errc::precondition_unmet: return "PreconditionUnmet";
        case Errc::undecidable_at_horizon: return "UndecidableAtHorizon";
        case Errc::window_not_special: return "WindowNotSpecial";
        case Errc::multiplicity_exceeded: return "MultiplicityExceeded";
        case Errc::mixed_field: return "MixedField";
        case Errc::io_error: return "IoError";
        case Errc::invariant_violation: return "InvariantViolation";
    }
    return "UnknownError";
}

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, std::string(errc_name(code)) + ": " + what);
}

// Exit statuses used by the CLI and honored by the test harness.
inline constexpr int exit_parse_error = 2;
inline constexpr int exit_computation_error = 3;
inline constexpr int exit_invariant_violation = 4;

}  // namespace cpn
