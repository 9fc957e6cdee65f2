#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace padicres {

/// Runs the acceptance suite, printing to the stream; returns an exit code.
using SelftestFn = std::function<int(std::ostream&)>;

/// The padicres command line. `args` includes the program name. Returns the
/// process exit code: 0 pass, 1 finding, 2 invalid input or usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const SelftestFn& selftest = {});

}  // namespace padicres
