#pragma once

// Command-line front end. run_cli is the whole program behind a testable
// interface: output streams are injected so the test suite can capture and
// byte-compare reports.

#include <ostream>

namespace triosc {

// Exit codes: 0 success, 1 usage error, 2 numerical error (the error kind is
// serialized into the report when a report can still be produced).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace triosc
