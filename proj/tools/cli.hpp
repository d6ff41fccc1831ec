#pragma once

#include <ostream>

namespace dsq::cli {

/// Runs one command line. Exit status: 0 nonempty / verified, 1 empty /
/// falsified, 2 undecided or error. A JSON report is always written, to the
/// -o path or to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dsq::cli
