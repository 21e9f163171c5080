#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "udw/gme.hpp"

namespace udw {

/// Plain-text X-state record, one per line:
///   N; a_1 .. a_n; b_1 .. b_n; Re(z_1) Im(z_1) .. Re(z_n) Im(z_n)
/// with n = 2^(N-1). Blank lines and lines starting with '#' are skipped.

/// Parse a single record. Throws ValidationError on malformed input and
/// InvalidState if the parsed state violates the X-state invariants.
XState parse_xstate_line(const std::string& line);

/// Parse every record in a stream. Errors are rethrown with the 1-based
/// line number prepended.
std::vector<XState> read_xstates(std::istream& in);

/// Serialize in the same format (15 significant digits).
std::string format_xstate(const XState& state);

} // namespace udw
