#pragma once

#include "rankr/core.hpp"

#include <iosfwd>
#include <string_view>

namespace rankr {

// "a", "a+bi", "a-bi", "bi", "i"; no spaces.
Scalar parse_complex(std::string_view text);
// Comma-separated complex literals.
Vector parse_complex_list(std::string_view text);

// Entry point of the rankr executable. Exit codes: 0 zero found or
// stationary point, 1 usage or input error, 2 iteration limit, 3 diverged,
// 4 solver failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankr
