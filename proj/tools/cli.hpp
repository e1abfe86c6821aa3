#pragma once

#include <ostream>

// Batch driver: simulate, law, verify, hypergeom.
// Exit codes: 0 ok, 1 usage or configuration error, 2 numerical failure,
// 3 a gating verification check failed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
