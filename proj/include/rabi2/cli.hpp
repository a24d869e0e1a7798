#pragma once

// Command-line front end.  Subcommands: spectrum, sweep, gtrace, juddian,
// oracle, check.  Emits deterministic CSV or JSON (15 significant digits,
// fixed row order).  Config precedence: flags > RABI2_* environment
// variables > built-in defaults.
//
// Exit codes: 0 success; 1 internal evaluation failure; 2 invalid
// parameters or configuration; 3 collapse-guard refusal; 4 failed
// invariant in `check`.

#include <iosfwd>

namespace rabi2 {

extern const char* const kToolVersion;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rabi2
