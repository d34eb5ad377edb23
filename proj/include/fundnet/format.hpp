#pragma once

#include <string>

namespace fundnet
{
    /// Shortest round-trip decimal form, independent of the C locale.
    /// Non-finite values print as `inf`, `-inf` and `nan`.
    std::string format_number(double x);

    /// Locale-independent parse of a complete decimal string; throws
    /// Error(ParseError) naming `what` on failure.
    double parse_number(const std::string& text, const std::string& what);
}
