#pragma once

#include <string>
#include <string_view>

namespace pnml {

// Shortest decimal form that round-trips to the same double. Infinities are
// written as "inf"/"-inf", which is also the CSV literal for unbounded
// regret values.
std::string format_double(double value);

// Strict parser for a single CSV cell. Accepts what format_double emits plus
// the usual decimal/scientific forms. Returns false on empty input or
// trailing characters.
bool try_parse_double(std::string_view text, double& out);

}  // namespace pnml
