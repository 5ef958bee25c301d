#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apeq::cli {

/// Exit codes of the command-line driver.
enum ExitCode {
  kOk = 0,               // success / equivalent / all samples attained
  kNegative = 1,         // well-formed negative result
  kUsage = 2,            // usage, parse, or input error
  kVerifyFailure = 3,    // internal verification (verify_verdict) mismatch
};

/// Runs one command; writes a single JSON document to `out`, diagnostics to
/// `err`, and returns the exit code. Commands:
///   basis <file> <sum>
///   integral-basis <file> <sum>
///   equiv <file> <sum1> <sum2> [--definition star|bohr] [--trace N]
///   bf <file> <sum> --orders n1,n2,...
///   mean <file> <sum> --sigma S --lambda L --T T
///   almost-periods <file> <sum> --eps E --sigma-lo A --sigma-hi B --tmax T
///   values <file> <sum1> <sum2> --sigma-lo A --sigma-hi B
///          [--samples N] [--seed K] [--tol X] [--tcap T]
///   corpus list
///   corpus run <name>
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace apeq::cli
