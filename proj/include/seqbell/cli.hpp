#pragma once

// Command-line front end. Subcommands:
//
//   svalues         closed-form F, G and both CHSH values at one angle
//   sweep           CSV table of analytic and exact-simulation S values
//   simulate        finite-statistics runs from a JSON config
//   verify-circuit  compile the optical circuits and compare against the
//                   abstract Kraus operators
//
// Angles cross this boundary in degrees. Exit codes: 0 success, 1 usage or
// config error, 2 verification failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace seqbell::cli {

// `args` excludes the program name. Writes results to `out`, diagnostics to
// `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace seqbell::cli
