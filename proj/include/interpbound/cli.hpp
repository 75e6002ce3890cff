#pragma once

namespace interpbound {

/// Entry point of the command-line tool. Exit codes: 0 success, 1 failed
/// verification check, 2 invalid input, 3 degenerate geometry.
int run_cli(int argc, const char* const* argv);

} // namespace interpbound
